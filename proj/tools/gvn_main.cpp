// gvn: run the value-numbering analyses from the command line.
//
// Exit status: 0 on success, 1 when the command reports findings (a
// non-empty diff under --expect-equal, or fuzz violations), 2 on errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gvn/analysis.hpp"
#include "gvn/error.hpp"
#include "gvn/fuzz.hpp"
#include "gvn/program.hpp"
#include "gvn/report.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFindings = 1;
constexpr int kError = 2;

struct Options {
  std::string file;
  std::string algo = "sed-modified";
  std::vector<std::string> algos;
  std::vector<std::string> points;
  std::string expr;
  std::optional<std::size_t> max_term_size;
  std::uint64_t seed = 1;
  std::size_t count = 100;
  bool loops = false;
  bool json = false;
  bool expect_equal = false;
  std::string relation;
};

std::string read_source(const std::string& path) {
  std::stringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw gvn::Error("cannot open '" + path + "'");
  ss << in.rdbuf();
  return ss.str();
}

gvn::AnalysisOptions analysis_options(const Options& o) {
  gvn::AnalysisOptions a;
  a.max_term_size = o.max_term_size;
  return a;
}

std::vector<std::string> selected_points(const gvn::AnalysisResult& r, const Options& o) {
  if (!o.points.empty()) return o.points;
  std::vector<std::string> out;
  for (const auto& [name, state] : r.states()) out.push_back(name);
  return out;
}

void emit(const Options& o, const gvn::Json& j, const std::string& text) {
  if (o.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << text;
  }
}

int cmd_analyze(const Options& o) {
  gvn::Program program = gvn::parse_program(read_source(o.file));
  auto r = gvn::AnalysisResult::run(program, gvn::parse_algo(o.algo), analysis_options(o));
  gvn::Json points = gvn::Json::array();
  std::string text;
  for (const std::string& p : selected_points(r, o)) {
    points.push_back(gvn::point_json(r, p, program));
    text += gvn::point_text(r, p);
  }
  for (const std::string& w : r.warnings()) std::cerr << "warning: " << w << "\n";
  emit(o, gvn::Json{{"file", o.file}, {"points", points}}, text);
  return kOk;
}

int cmd_available(const Options& o) {
  gvn::Program program = gvn::parse_program(read_source(o.file));
  gvn::Algo algo = gvn::parse_algo(o.algo);
  gvn::Term t = gvn::parse_term(o.expr);
  auto r = gvn::AnalysisResult::run(program, algo, analysis_options(o));
  auto answer = r.available(o.points.front(), t);
  emit(o, gvn::availability_json(answer, algo), gvn::availability_text(answer, algo));
  return kOk;
}

int cmd_diff(const Options& o) {
  if (o.algos.size() != 2) throw gvn::Error("--algos takes exactly two algorithms, e.g. sed-original,sed-modified");
  gvn::Program program = gvn::parse_program(read_source(o.file));
  gvn::AnalysisOptions opts = analysis_options(o);
  auto a = gvn::AnalysisResult::run(program, gvn::parse_algo(o.algos[0]), opts);
  opts.universe = a.universe_ptr();
  auto b = gvn::AnalysisResult::run(program, gvn::parse_algo(o.algos[1]), opts);
  gvn::Json reports = gvn::Json::array();
  std::string text;
  gvn::Relation rel = gvn::default_relation(a.algo(), b.algo());
  if (o.relation == "node") rel = gvn::Relation::Node;
  if (o.relation == "closure") rel = gvn::Relation::Closure;
  bool differs = false;
  for (const std::string& p : selected_points(a, o)) {
    auto d = gvn::diff_at(a, b, p, rel);
    differs = differs || !d.empty();
    reports.push_back(gvn::diff_json(d));
    text += gvn::diff_text(d);
  }
  emit(o, gvn::Json{{"file", o.file}, {"diffs", reports}}, text);
  return o.expect_equal && differs ? kFindings : kOk;
}

int cmd_fuzz(const Options& o) {
  if (o.count < 1) throw gvn::Error("--count must be at least 1");
  gvn::FuzzShape shape;
  shape.loops = o.loops;
  if (o.max_term_size) shape.max_term_size = *o.max_term_size;
  auto summary = gvn::run_fuzz(o.seed, o.count, shape);
  emit(o, gvn::fuzz_json(summary), gvn::fuzz_text(summary));
  return summary.findings.empty() ? kOk : kFindings;
}

int cmd_dot(const Options& o) {
  gvn::Algo algo = gvn::parse_algo(o.algo);
  if (algo == gvn::Algo::Kildall) throw gvn::Error("kildall is not a DAG-producing analysis");
  gvn::Program program = gvn::parse_program(read_source(o.file));
  auto r = gvn::AnalysisResult::run(program, algo, analysis_options(o));
  std::string point = o.points.empty() ? std::string(gvn::kExitPoint) : o.points.front();
  if (o.points.empty() && !r.cfg().has_point(point)) point = std::string(gvn::kEntryPoint);
  std::cout << gvn::to_dot(std::get<gvn::Sed>(r.state(point)), "sed");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Global value numbering over Herbrand equivalence"};
  app.require_subcommand(1);
  Options o;

  auto add_file = [&](CLI::App* sub) { sub->add_option("file", o.file, "Program source, or - for stdin")->required(); };
  auto add_algo = [&](CLI::App* sub) {
    sub->add_option("--algo", o.algo, "kildall, sed-original or sed-modified")->capture_default_str();
  };
  auto add_bound = [&](CLI::App* sub) {
    sub->add_option("--max-term-size", o.max_term_size, "Term universe bound (default: largest rhs)");
  };
  auto add_json = [&](CLI::App* sub) { sub->add_flag("--json", o.json, "Machine-readable output"); };

  auto* analyze = app.add_subcommand("analyze", "Print the state at program points");
  add_file(analyze);
  add_algo(analyze);
  analyze->add_option("--point", o.points, "Program point label (repeatable; default: all)");
  add_bound(analyze);
  add_json(analyze);

  auto* available = app.add_subcommand("available", "Is an expression already computed at a point?");
  add_file(available);
  add_algo(available);
  available->add_option("--point", o.points, "Program point label")->required()->expected(1);
  available->add_option("--expr", o.expr, "Expression, e.g. x+y")->required();
  add_bound(available);
  add_json(available);

  auto* diff = app.add_subcommand("diff", "Equivalences found by one analysis but not the other");
  add_file(diff);
  diff->add_option("--algos", o.algos, "Two algorithms, comma separated")->required()->delimiter(',');
  diff->add_option("--point", o.points, "Program point label (repeatable; default: all)");
  add_bound(diff);
  add_json(diff);
  diff->add_option("--relation", o.relation, "node or closure (default: closure when kildall is involved)")
      ->check(CLI::IsMember({"node", "closure"}));
  diff->add_flag("--expect-equal", o.expect_equal, "Exit with 1 when the analyses differ");

  auto* fuzz = app.add_subcommand("fuzz", "Differential testing on random programs");
  fuzz->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  fuzz->add_option("--count", o.count, "Number of programs")->capture_default_str();
  fuzz->add_option("--max-term-size", o.max_term_size, "Largest generated rhs (default: 3)");
  fuzz->add_flag("--loops", o.loops, "Also generate while loops");
  add_json(fuzz);

  auto* dot = app.add_subcommand("dot", "Graphviz rendering of the SED at a point");
  add_file(dot);
  add_algo(dot);
  dot->add_option("--point", o.points, "Program point label (default: exit)")->expected(1);
  add_bound(dot);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }

  try {
    if (*analyze) return cmd_analyze(o);
    if (*available) return cmd_available(o);
    if (*diff) return cmd_diff(o);
    if (*fuzz) return cmd_fuzz(o);
    if (*dot) return cmd_dot(o);
  } catch (const gvn::Error& e) {
    std::cerr << "gvn: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
