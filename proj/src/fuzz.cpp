#include "gvn/fuzz.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "gvn/analysis.hpp"
#include "gvn/error.hpp"
#include "gvn/report.hpp"
#include "gvn/universe.hpp"

namespace gvn {

namespace {

constexpr std::array<Op, 4> kOps = {Op::Add, Op::Sub, Op::Mul, Op::Div};

std::string var_name(std::size_t k) {
  if (k < 26) return std::string(1, static_cast<char>('a' + k));
  return "v" + std::to_string(k);
}

constexpr std::size_t kSizeCap = 1'000;

std::size_t value_size(const Term& t, const std::map<std::string, std::size_t>& sz) {
  switch (t.kind()) {
    case Term::Kind::Variable: {
      auto it = sz.find(t.name());
      return it == sz.end() ? 0 : it->second;
    }
    case Term::Kind::Constant:
      return 0;
    case Term::Kind::Apply:
      return std::min(kSizeCap, 1 + value_size(t.left(), sz) + value_size(t.right(), sz));
  }
  return 0;
}

class Generator {
 public:
  Generator(std::mt19937_64& rng, const FuzzShape& shape) : rng_(rng), shape_(shape) { pick_symbols(); }

  Program run() {
    stmts_left_ = uniform(1, std::max<std::size_t>(1, shape_.max_stmts));
    joins_left_ = shape_.max_joins;
    Program p;
    p.items = block(0, true);
    return p;
  }

 private:
  std::size_t uniform(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  void pick_symbols() {
    bound_ = uniform(1, std::max<std::size_t>(1, shape_.max_term_size));
    std::size_t nvars = uniform(1, std::max<std::size_t>(1, shape_.max_vars));
    std::size_t nconsts = uniform(0, 3);
    std::size_t nops = uniform(1, kOps.size());
    auto fits = [&] {
      TermUniverse u;
      u.bound = bound_ + shape_.oracle_slack + 2;
      for (std::size_t k = 0; k < nvars; ++k) u.variables.insert(var_name(k));
      for (std::size_t k = 1; k <= nconsts; ++k) u.constants.insert(Integer(k));
      for (std::size_t k = 0; k < nops; ++k) u.operators.insert(kOps[k]);
      return universe_count(u) <= shape_.universe_budget;
    };
    while (!fits()) {
      if (nops > 1) {
        --nops;
      } else if (nconsts > 1) {
        --nconsts;
      } else if (nvars > 2) {
        --nvars;
      } else if (bound_ > 1) {
        --bound_;
      } else {
        break;
      }
    }
    for (std::size_t k = 0; k < nvars; ++k) vars_.push_back(var_name(k));
    for (std::size_t k = 1; k <= nconsts; ++k) consts_.push_back(Integer(k));

    // Largest value size the oracle universe can still hold.
    TermUniverse u;
    u.variables.insert(vars_.begin(), vars_.end());
    u.constants.insert(consts_.begin(), consts_.end());
    for (std::size_t k = 0; k < nops; ++k) u.operators.insert(kOps[k]);
    max_value_ = bound_;
    for (u.bound = bound_ + 1 + shape_.oracle_slack; universe_count(u) <= shape_.universe_budget; ++u.bound) {
      max_value_ = u.bound - shape_.oracle_slack;
    }
    std::vector<Op> ops(kOps.begin(), kOps.end());
    std::shuffle(ops.begin(), ops.end(), rng_);
    ops_.assign(ops.begin(), ops.begin() + static_cast<std::ptrdiff_t>(nops));
  }

  Term atom() {
    if (consts_.empty() || chance(0.7)) return Term::variable(vars_[uniform(0, vars_.size() - 1)]);
    return Term::constant(consts_[uniform(0, consts_.size() - 1)]);
  }

  Term expr(std::size_t size) {
    if (size == 0) return atom();
    std::size_t ls = uniform(0, size - 1);
    Op op = ops_[uniform(0, ops_.size() - 1)];
    Term l = expr(ls);
    return Term::apply(op, std::move(l), expr(size - 1 - ls));
  }

  // Right-hand sides whose value would outgrow the oracle universe are
  // redrawn; an atom always fits.
  Statement statement() {
    std::string target = vars_[uniform(0, vars_.size() - 1)];
    Term rhs = atom();
    for (int attempt = 0; attempt < 16; ++attempt) {
      Term t = !seen_.empty() && chance(0.35) ? seen_[uniform(0, seen_.size() - 1)] : expr(uniform(0, bound_));
      if (value_size(t, sizes_) <= max_value_) {
        rhs = std::move(t);
        break;
      }
    }
    if (rhs.is_apply()) seen_.push_back(rhs);
    sizes_[target] = value_size(rhs, sizes_);
    return Statement{std::move(target), std::move(rhs)};
  }

  std::vector<Item> block(std::size_t depth, bool top) {
    std::vector<Item> items;
    while (stmts_left_ > 0) {
      if (!top && chance(0.3)) break;
      if (joins_left_ > 0 && depth < 2 && chance(0.2)) {
        --joins_left_;
        Branch b;
        auto entry = sizes_;
        b.then_body = block(depth + 1, false);
        std::swap(entry, sizes_);
        b.else_body = block(depth + 1, false);
        for (const auto& [v, n] : entry) sizes_[v] = std::max(sizes_[v], n);
        items.push_back(Item{std::move(b)});
      } else if (shape_.loops && depth < 2 && chance(0.15)) {
        Loop w;
        auto entry = sizes_;
        w.body = block(depth + 1, false);
        for (const auto& [v, n] : entry) sizes_[v] = std::max(sizes_[v], n);
        items.push_back(Item{std::move(w)});
      } else {
        --stmts_left_;
        items.push_back(Item{statement()});
      }
    }
    return items;
  }

  std::mt19937_64& rng_;
  const FuzzShape& shape_;
  std::size_t bound_ = 1;
  std::vector<std::string> vars_;
  std::vector<Integer> consts_;
  std::vector<Op> ops_;
  std::vector<Term> seen_;
  std::size_t max_value_ = 1;
  std::map<std::string, std::size_t> sizes_;
  std::size_t stmts_left_ = 0;
  std::size_t joins_left_ = 0;
};

void label_items(std::vector<Item>& items, std::size_t& next) {
  std::vector<Item> out;
  auto label = [&] { out.push_back(Item{Label{"__p" + std::to_string(next++)}}); };
  label();
  for (Item& it : items) {
    if (auto* b = std::get_if<Branch>(&it.node)) {
      label_items(b->then_body, next);
      label_items(b->else_body, next);
    } else if (auto* w = std::get_if<Loop>(&it.node)) {
      label_items(w->body, next);
    }
    bool is_label = std::holds_alternative<Label>(it.node);
    out.push_back(std::move(it));
    if (!is_label) label();
  }
  items = std::move(out);
}

std::string first_pair(const DiffReport& d) {
  const auto& pairs = d.only_in_a.empty() ? d.only_in_b : d.only_in_a;
  if (pairs.empty()) return "";
  std::string side(algo_name(d.only_in_a.empty() ? d.algo_b : d.algo_a));
  return pairs.front().first.to_string() + " == " + pairs.front().second.to_string() + " only under " + side;
}

// First pair on which the restricted Kildall relation and the partition
// denoted by `sed` disagree.
std::string kildall_pair(const AnalysisResult& sed, const AnalysisResult& kildall, const std::string& point,
                         std::size_t bounded) {
  const Universe& u = sed.universe();
  auto rs = sed.relation(point, Relation::Closure);
  auto rk = kildall.relation(point);
  for (std::size_t i = 0; i < bounded; ++i) {
    for (std::size_t j = i + 1; j < bounded; ++j) {
      bool in_s = rs[i] == rs[j];
      if (in_s == (rk[i] == rk[j])) continue;
      return u.term(i).to_string() + " == " + u.term(j).to_string() + " only under " +
             std::string(algo_name(in_s ? sed.algo() : kildall.algo()));
    }
  }
  return "";
}

}  // namespace

Program generate_program(std::mt19937_64& rng, const FuzzShape& shape) {
  for (;;) {
    Program p = Generator(rng, shape).run();
    TermUniverse u = TermUniverse::of(p, oracle_bound(p, shape.oracle_slack));
    if (universe_count(u) <= shape.universe_budget) return p;
  }
}

namespace {

void walk_sizes(const std::vector<Item>& items, std::map<std::string, std::size_t>& sz, std::size_t& best) {
  for (const Item& it : items) {
    if (const auto* s = std::get_if<Statement>(&it.node)) {
      std::size_t v = value_size(s->rhs, sz);
      sz[s->target] = v;
      best = std::max(best, v);
    } else if (const auto* b = std::get_if<Branch>(&it.node)) {
      auto other = sz;
      walk_sizes(b->then_body, sz, best);
      walk_sizes(b->else_body, other, best);
      for (const auto& [v, n] : other) sz[v] = std::max(sz[v], n);
    } else if (const auto* w = std::get_if<Loop>(&it.node)) {
      auto body = sz;
      walk_sizes(w->body, body, best);
      for (const auto& [v, n] : body) sz[v] = std::max(sz[v], n);
    }
  }
}

}  // namespace

std::size_t value_size_bound(const Program& program) {
  std::map<std::string, std::size_t> sz;
  std::size_t best = 0;
  walk_sizes(program.items, sz, best);
  return best;
}

std::size_t oracle_bound(const Program& program, std::size_t slack) {
  return std::max(std::max<std::size_t>(1, program.max_term_size()) + slack, value_size_bound(program));
}

Program label_everywhere(const Program& program) {
  Program p = program;
  std::size_t next = 0;
  label_items(p.items, next);
  return p;
}

ProgramCheck check_program(const Program& program, std::size_t oracle_slack) {
  ProgramCheck c;
  c.e = program.distinct_expressions();
  const bool loop_free = !program.has_loops();
  try {
    Program labeled = label_everywhere(program);
    AnalysisOptions opts;
    auto original = AnalysisResult::run(labeled, Algo::SedOriginal, opts);
    opts.universe = original.universe_ptr();
    auto modified = AnalysisResult::run(labeled, Algo::SedModified, opts);
    const std::size_t bounded = original.universe().size();
    opts.universe = nullptr;
    opts.max_term_size = std::max(original.universe_spec().bound, oracle_bound(program, oracle_slack));
    auto kildall = AnalysisResult::run(labeled, Algo::Kildall, opts);
    c.s_prime = modified.s_prime();

    for (const auto& [point, state] : modified.states()) {
      auto ro = original.relation(point, Relation::Node);
      auto rm = modified.relation(point, Relation::Node);
      // Canonical ids number classes by first occurrence, so a prefix of
      // the larger universe's relation is already canonical.
      auto rk = kildall.relation(point);
      rk.resize(bounded);
      auto co = original.relation(point, Relation::Closure);
      auto cm = modified.relation(point, Relation::Closure);
      if (!relation_subset(ro, rm)) {
        c.findings.push_back(
            {"original-not-subset", point, first_pair(diff_at(original, modified, point, Relation::Node))});
      } else if (!relation_subset(co, cm)) {
        c.findings.push_back(
            {"original-not-subset", point, first_pair(diff_at(original, modified, point, Relation::Closure))});
      }
      if (ro != rm) c.strict_gain = true;
      if (loop_free && cm != rk) {
        c.findings.push_back({"modified-differs-from-kildall", point, kildall_pair(modified, kildall, point, bounded)});
      } else if (!loop_free && !relation_subset(cm, rk)) {
        c.findings.push_back({"modified-not-subset-of-kildall", point, kildall_pair(modified, kildall, point, bounded)});
      }
    }

    for (const AnalysisResult* r : {&original, &modified}) {
      for (const JoinStats& j : r->joins().joins()) {
        ++c.joins;
        c.max_intersect_calls = std::max(c.max_intersect_calls, j.intersect_calls);
        c.max_depth = std::max(c.max_depth, j.max_depth);
        std::string who(algo_name(r->algo()));
        if (j.intersect_calls > c.e * c.e) {
          c.findings.push_back({"intersect-bound", who,
                                std::to_string(j.intersect_calls) + " evaluations > e^2 = " + std::to_string(c.e * c.e)});
        }
        if (j.max_depth > c.s_prime) {
          c.findings.push_back({"depth-bound", who,
                                "depth " + std::to_string(j.max_depth) + " > s' = " + std::to_string(c.s_prime)});
        }
      }
    }
  } catch (const Error& ex) {
    c.findings.push_back({"analysis-error", "", ex.what()});
  }
  return c;
}

namespace {

std::vector<std::vector<Item>> shrink(const std::vector<Item>& items) {
  std::vector<std::vector<Item>> out;
  auto with = [&](std::size_t i, std::vector<Item> replacement) {
    std::vector<Item> v(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(i));
    v.insert(v.end(), std::make_move_iterator(replacement.begin()), std::make_move_iterator(replacement.end()));
    v.insert(v.end(), items.begin() + static_cast<std::ptrdiff_t>(i) + 1, items.end());
    return v;
  };
  for (std::size_t i = 0; i < items.size(); ++i) {
    out.push_back(with(i, {}));
    const auto& node = items[i].node;
    if (const auto* b = std::get_if<Branch>(&node)) {
      out.push_back(with(i, b->then_body));
      out.push_back(with(i, b->else_body));
      for (auto& t : shrink(b->then_body)) out.push_back(with(i, {Item{Branch{std::move(t), b->else_body}}}));
      for (auto& e : shrink(b->else_body)) out.push_back(with(i, {Item{Branch{b->then_body, std::move(e)}}}));
    } else if (const auto* w = std::get_if<Loop>(&node)) {
      out.push_back(with(i, w->body));
      for (auto& body : shrink(w->body)) out.push_back(with(i, {Item{Loop{std::move(body)}}}));
    } else if (const auto* s = std::get_if<Statement>(&node); s && s->rhs.is_apply()) {
      out.push_back(with(i, {Item{Statement{s->target, s->rhs.left()}}}));
      out.push_back(with(i, {Item{Statement{s->target, s->rhs.right()}}}));
    }
  }
  return out;
}

}  // namespace

Program minimize(const Program& program, const std::string& kind, std::size_t oracle_slack) {
  auto reproduces = [&](const Program& p) {
    auto c = check_program(p, oracle_slack);
    return std::any_of(c.findings.begin(), c.findings.end(), [&](const Finding& f) { return f.kind == kind; });
  };
  Program current = program;
  bool progress = true;
  while (progress) {
    progress = false;
    for (auto& items : shrink(current.items)) {
      Program candidate{std::move(items)};
      if (reproduces(candidate)) {
        current = std::move(candidate);
        progress = true;
        break;
      }
    }
  }
  return current;
}

FuzzSummary run_fuzz(std::uint64_t seed, std::size_t count, const FuzzShape& shape) {
  FuzzSummary s;
  s.seed = seed;
  s.count = count;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    Program p = generate_program(rng, shape);
    if (!p.has_loops()) ++s.loop_free;
    s.statements += p.statements().size();
    std::size_t size = p.max_term_size();
    if (s.by_term_size.size() <= size) s.by_term_size.resize(size + 1, 0);
    ++s.by_term_size[size];
    ProgramCheck c = check_program(p, shape.oracle_slack);
    s.joins += c.joins;
    if (c.strict_gain) ++s.strict_gains;
    s.max_intersect_calls = std::max(s.max_intersect_calls, c.max_intersect_calls);
    s.max_depth = std::max(s.max_depth, c.max_depth);
    std::set<std::string> kinds;
    for (const Finding& f : c.findings) {
      if (f.kind == "intersect-bound") ++s.bound_violations;
      if (f.kind == "depth-bound") ++s.depth_violations;
      if (!kinds.insert(f.kind).second) continue;
      s.findings.push_back({i, f, print_program(minimize(p, f.kind, shape.oracle_slack))});
    }
  }
  return s;
}

nlohmann::ordered_json fuzz_json(const FuzzSummary& s) {
  nlohmann::ordered_json findings = nlohmann::ordered_json::array();
  for (const auto& f : s.findings) {
    findings.push_back({{"case", f.index},
                        {"kind", f.finding.kind},
                        {"point", f.finding.point},
                        {"detail", f.finding.detail},
                        {"reproducer", f.reproducer}});
  }
  return {{"seed", s.seed},
          {"count", s.count},
          {"loop_free", s.loop_free},
          {"joins", s.joins},
          {"strict_gains", s.strict_gains},
          {"statements", s.statements},
          {"programs_by_term_size", s.by_term_size},
          {"instrumentation",
           {{"intersect_calls_max", s.max_intersect_calls},
            {"recursion_depth_max", s.max_depth},
            {"bound_violations", s.bound_violations},
            {"depth_violations", s.depth_violations}}},
          {"findings", findings}};
}

std::string fuzz_text(const FuzzSummary& s) {
  std::string out = "seed " + std::to_string(s.seed) + ", " + std::to_string(s.count) + " programs (" +
                    std::to_string(s.loop_free) + " loop-free), " + std::to_string(s.joins) + " joins\n";
  out += std::to_string(s.statements) + " statements; programs by largest rhs size:";
  for (std::size_t k = 0; k < s.by_term_size.size(); ++k) {
    out += " " + std::to_string(k) + ":" + std::to_string(s.by_term_size[k]);
  }
  out += "\n";
  out += "sed-original strictly weaker than sed-modified in " + std::to_string(s.strict_gains) + " programs\n";
  out += "max intersect evaluations per join: " + std::to_string(s.max_intersect_calls) +
         ", max recursion depth: " + std::to_string(s.max_depth) + "\n";
  out += "bound violations: " + std::to_string(s.bound_violations) +
         ", depth violations: " + std::to_string(s.depth_violations) + "\n";
  out += std::to_string(s.findings.size()) + " findings\n";
  for (const auto& f : s.findings) {
    out += "\n#" + std::to_string(f.index) + " " + f.finding.kind;
    if (!f.finding.point.empty()) out += " at " + f.finding.point;
    if (!f.finding.detail.empty()) out += ": " + f.finding.detail;
    out += "\n" + f.reproducer;
  }
  return out;
}

}  // namespace gvn
