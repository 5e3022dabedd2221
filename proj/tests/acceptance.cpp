// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "gvn/analysis.hpp"
#include "gvn/fuzz.hpp"
#include "gvn/join.hpp"
#include "support/fixtures.hpp"
#include "support/random_sed.hpp"

using namespace gvn;
using testing::fixture;
using testing::T;

namespace {

using Strings = std::vector<std::string>;

// Collects failed expectations for one criterion.
struct Check {
  std::vector<std::string> failures;
  std::string note;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

std::string join_strings(const std::vector<Term>& ts) {
  std::string out;
  for (const Term& t : ts) out += (out.empty() ? "" : ", ") + t.to_string();
  return "[" + out + "]";
}

bool class_is(const AnalysisResult& r, const std::string& point, const std::string& of, const Strings& expected) {
  return testing::strings(std::get<StructuredPartition>(r.state(point)).class_members(T(of))) == expected;
}

void branch_states(Check& c) {
  Program p = fixture("diamond.gvn");
  AnalysisResult k = AnalysisResult::run(p, Algo::Kildall);
  const Strings sum = {"x+y", "x+2", "1+y", "1+2"};
  auto with = [](std::string head, Strings tail) {
    tail.insert(tail.begin(), std::move(head));
    return tail;
  };
  c.expect(class_is(k, "p1", "c", with("c", sum)) && class_is(k, "p1", "d", {"d"}) &&
               class_is(k, "p1", "x", {"x", "1"}) && class_is(k, "p1", "y", {"y", "2"}) &&
               class_is(k, "p1", "z", {"z", "3"}),
           "kildall partition at p1");
  c.expect(class_is(k, "p2", "d", with("d", sum)) && class_is(k, "p2", "c", {"c"}) &&
               class_is(k, "p2", "x", {"x", "1"}) && class_is(k, "p2", "y", {"y", "2"}) &&
               class_is(k, "p2", "z", {"z", "4"}),
           "kildall partition at p2");
  c.expect(class_is(k, "p3", "x+y", sum) && class_is(k, "p3", "c", {"c"}) && class_is(k, "p3", "d", {"d"}) &&
               class_is(k, "p3", "z", {"z"}) && class_is(k, "p3", "x", {"x", "1"}) &&
               class_is(k, "p3", "y", {"y", "2"}),
           "kildall partition at p3");

  auto original = AnalysisResult::run(p, Algo::SedOriginal).available("p3", T("x+y"));
  c.expect(!original.available, "sed-original reports x+y available at p3");
  auto modified = AnalysisResult::run(p, Algo::SedModified).available("p3", T("x+y"));
  c.expect(modified.available, "sed-modified misses x+y at p3");
  for (const std::string& t : sum) {
    c.expect(std::find(modified.witness.begin(), modified.witness.end(), T(t)) != modified.witness.end(),
             "witness lacks " + t);
  }
  c.note = "sed-modified witness " + join_strings(modified.witness);
}

void join_shape(Check& c) {
  Program p = fixture("diamond.gvn");
  Sed g1 = testing::sed_at(p, Algo::SedOriginal, "p1");
  Sed g2 = testing::sed_at(p, Algo::SedOriginal, "p2");
  SedBuilder b;
  for (const char* v : {"c", "d", "e", "z"}) b.add_bottom({v});
  NodeId one = b.intern_const(Integer(1));
  NodeId two = b.intern_const(Integer(2));
  b.add_var(one, "x");
  b.add_var(two, "y");
  b.intern_app(Op::Add, one, two);
  Sed expected = std::move(b).build();
  Sed joined = sed_join_modified(g1, g2, Cfg::build(p).program_point_count());
  c.expect(isomorphic(joined, expected), "modified join differs:\n" + render_sed(joined));
  c.expect(isomorphic(testing::sed_at(p, Algo::SedModified, "p3"), expected), "state at p3 differs");
  c.note = std::to_string(joined.size()) + " nodes, anonymous + over <x,1> and <y,2>";
}

void overwritten_sum(Check& c) {
  Program p = fixture("overwrite.gvn");
  AnalysisResult original = AnalysisResult::run(p, Algo::SedOriginal);
  c.expect(!original.available("ab2", T("a+b")).available, "sed-original reports the second a+b available");
  for (Algo algo : {Algo::SedModified, Algo::Kildall}) {
    AnalysisResult r = AnalysisResult::run(p, algo);
    for (const char* point : {"ab1", "ab2"}) {
      c.expect(r.available(point, T("a+b")).available,
               std::string(algo_name(algo)) + " misses a+b at " + point);
    }
  }
  c.note = "second a+b: sed-original no, sed-modified and kildall yes";
}

void differential(Check& c, const FuzzSummary& s, double seconds) {
  c.expect(s.count >= 500 && s.loop_free == s.count, "fewer than 500 loop-free programs");
  c.expect(s.findings.empty(), std::to_string(s.findings.size()) + " findings");
  for (const auto& f : s.findings) c.failures.push_back(f.finding.kind + " at " + f.finding.point + ":\n" + f.reproducer);
  c.expect(s.strict_gains >= 1, "no program where sed-original is strictly weaker");
  c.expect(seconds < 120.0, "took " + std::to_string(seconds) + "s");
  std::ostringstream os;
  os << s.count << " programs, " << s.joins << " joins, " << s.strict_gains << " strict gains, " << seconds << "s";
  c.note = os.str();
}

void complexity(Check& c, const FuzzSummary& loop_free, const FuzzSummary& looping) {
  std::size_t joins = 0;
  for (const FuzzSummary* s : {&loop_free, &looping}) {
    joins += s->joins;
    c.expect(s->bound_violations == 0, std::to_string(s->bound_violations) + " joins above e^2 evaluations");
    c.expect(s->depth_violations == 0, std::to_string(s->depth_violations) + " joins deeper than s'");
  }
  for (const char* name : {"diamond.gvn", "overwrite.gvn", "loop.gvn"}) {
    ProgramCheck pc = check_program(fixture(name));
    joins += pc.joins;
    c.expect(pc.max_intersect_calls <= pc.e * pc.e, std::string(name) + " exceeds e^2");
    c.expect(pc.max_depth <= pc.s_prime, std::string(name) + " exceeds s'");
  }
  std::ostringstream os;
  os << joins << " joins, max evaluations " << std::max(loop_free.max_intersect_calls, looping.max_intersect_calls)
     << ", max depth " << std::max(loop_free.max_depth, looping.max_depth);
  c.note = os.str();
}

void herbrand(Check& c) {
  struct Case {
    const char* program;
    bool equal;
  };
  for (const Case& k : {Case{"x := a + b; y := b + a;", false}, Case{"x := 1 + 2; y := 3;", false},
                        Case{"x := 1 + 2; y := 1 + 2;", true}}) {
    Program p = parse_program(k.program);
    for (Algo algo : kAllAlgos) {
      AnalysisResult r = AnalysisResult::run(p, algo);
      for (Relation rel : {Relation::Node, Relation::Closure}) {
        c.expect(r.equiv(kExitPoint, T("x"), T("y"), rel) == k.equal,
                 std::string(algo_name(algo)) + " on '" + k.program + "'");
      }
    }
  }
  c.note = "3 programs under 3 analyses";
}

template <class A>
bool at_fixpoint(const Cfg& cfg, const A& a) {
  auto r = run_fixpoint(cfg, a);
  Warnings w;
  std::vector<std::optional<typename A::State>> out(cfg.blocks().size());
  for (BlockId b = 0; b < cfg.blocks().size(); ++b) {
    if (r.block_in[b]) out[b] = replay(a, cfg, *r.block_in[b], Position{b, cfg.block(b).statements.size()}, w);
  }
  for (BlockId b = 0; b < cfg.blocks().size(); ++b) {
    if (!r.block_in[b]) continue;
    std::optional<typename A::State> in;
    if (b == cfg.entry()) in = a.initial();
    for (BlockId p : cfg.block(b).preds) {
      if (out[p]) in = in ? a.join(*in, *out[p]) : *out[p];
    }
    if (!in || !a.equal(*in, *r.block_in[b])) return false;
  }
  return true;
}

void properties(Check& c) {
  constexpr int kCases = 1000;
  constexpr std::size_t kBudget = 16;
  std::mt19937_64 rng(2024);
  for (int i = 0; i < kCases; ++i) {
    Sed a = testing::random_sed(rng);
    Sed b = testing::random_sed(rng);
    c.expect(isomorphic(sed_join_modified(a, a, kBudget), a), "modified join not idempotent:\n" + render_sed(a));
    c.expect(isomorphic(sed_join_original(a, a, kBudget), prune_unnecessary(a)),
             "original join not idempotent:\n" + render_sed(a));
    c.expect(isomorphic(sed_join_modified(a, b, kBudget), sed_join_modified(b, a, kBudget)),
             "modified join not commutative");
    c.expect(isomorphic(sed_join_original(a, b, kBudget), sed_join_original(b, a, kBudget)),
             "original join not commutative");
  }

  TermUniverse spec;
  spec.variables = testing::kSedVars;
  spec.constants = {Integer(1), Integer(2)};
  spec.operators = {Op::Add, Op::Mul};
  spec.bound = 2;
  auto u = Universe::build(spec);
  auto partition = [&] {
    StructuredPartition p = kildall_initial(u);
    for (int k = std::uniform_int_distribution<int>(0, 5)(rng); k > 0; --k) {
      p = kildall_transfer(p, testing::random_statement(rng));
    }
    return p;
  };
  for (int i = 0; i < kCases; ++i) {
    StructuredPartition a = partition(), b = partition(), d = partition();
    c.expect(kildall_meet(a, a) == a, "meet not idempotent");
    c.expect(kildall_meet(a, b) == kildall_meet(b, a), "meet not commutative");
    c.expect(kildall_meet(kildall_meet(a, b), d) == kildall_meet(a, kildall_meet(b, d)), "meet not associative");
  }

  FuzzShape shape;
  shape.loops = true;
  shape.max_vars = 4;
  shape.max_term_size = 2;
  shape.universe_budget = 5000;
  int looping = 0;
  for (int i = 0; i < kCases; ++i) {
    Program p = generate_program(rng, shape);
    looping += p.has_loops();
    Cfg cfg = Cfg::build(p);
    std::size_t s_prime = cfg.program_point_count();
    try {
      c.expect(at_fixpoint(cfg, SedAnalysis(cfg.variables(), s_prime, false)) &&
                   at_fixpoint(cfg, SedAnalysis(cfg.variables(), s_prime, true)) &&
                   at_fixpoint(cfg, KildallAnalysis(Universe::build(TermUniverse::of(p)))),
               "not a fixpoint:\n" + print_program(p));
    } catch (const DivergenceError& e) {
      c.failures.push_back(std::string(e.what()) + ":\n" + print_program(p));
    }
  }
  c.note = std::to_string(kCases) + " join pairs, " + std::to_string(kCases) + " meet triples, " +
           std::to_string(kCases) + " programs (" + std::to_string(looping) + " with loops)";
}

}  // namespace

int main() {
  auto start = std::chrono::steady_clock::now();
  FuzzSummary loop_free = run_fuzz(1, 500);
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  FuzzShape loops;
  loops.loops = true;
  FuzzSummary looping = run_fuzz(11, 100, loops);

  struct Criterion {
    const char* name;
    std::function<void(Check&)> run;
  };
  const std::vector<Criterion> criteria = {
      {"branch join golden states", branch_states},
      {"modified join shape", join_shape},
      {"redundant a+b after overwrite", overwritten_sum},
      {"differential suite", [&](Check& c) { differential(c, loop_free, seconds); }},
      {"join complexity bounds", [&](Check& c) { complexity(c, loop_free, looping); }},
      {"uninterpreted operators", herbrand},
      {"algebraic properties and convergence", properties},
  };

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      criteria[i].run(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    bool ok = c.failures.empty();
    all = all && ok;
    std::cout << "criterion " << i + 1 << ": " << (ok ? "PASS" : "FAIL") << " - " << criteria[i].name;
    if (!c.note.empty()) std::cout << " (" << c.note << ")";
    std::cout << "\n";
    for (std::size_t k = 0; k < c.failures.size() && k < 5; ++k) std::cout << "    " << c.failures[k] << "\n";
  }
  return all ? 0 : 1;
}
