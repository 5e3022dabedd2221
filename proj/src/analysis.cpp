#include "gvn/analysis.hpp"

#include <algorithm>
#include <unordered_map>

#include "gvn/error.hpp"

namespace gvn {

std::string_view algo_name(Algo algo) {
  switch (algo) {
    case Algo::Kildall:
      return "kildall";
    case Algo::SedOriginal:
      return "sed-original";
    case Algo::SedModified:
      return "sed-modified";
  }
  return "?";
}

Algo parse_algo(std::string_view name) {
  for (Algo a : kAllAlgos) {
    if (algo_name(a) == name) return a;
  }
  throw Error("unknown algorithm '" + std::string(name) + "' (expected kildall, sed-original or sed-modified)");
}

Sed SedAnalysis::transfer(const Sed& s, const Statement& st, Warnings&) const {
  Sed next = sed_transfer(s, st);
  return original_ ? prune_unnecessary(next) : next;
}

Sed SedAnalysis::join(const Sed& a, const Sed& b) const {
  JoinStats stats;
  Sed out = original_ ? sed_join_original(a, b, s_prime_, &stats) : sed_join_modified(a, b, s_prime_, &stats);
  if (recorder_) recorder_->record(stats);
  return out;
}

namespace {

std::vector<std::uint32_t> canonical_ids(const std::vector<std::uint64_t>& keys) {
  std::unordered_map<std::uint64_t, std::uint32_t> ids;
  std::vector<std::uint32_t> out(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    out[i] = ids.emplace(keys[i], static_cast<std::uint32_t>(ids.size())).first->second;
  }
  return out;
}

bool class_before(const std::vector<Term>& a, const std::vector<Term>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return canonical_compare(a.front(), b.front()) < 0;
}

template <class State>
void collect(const FixpointResult<State>& f, std::vector<std::pair<std::string, AnalysisState>>& states,
             std::size_t& iterations, Warnings& warnings) {
  for (const auto& [name, s] : f.states) states.emplace_back(name, s);
  iterations = f.iterations;
  warnings = f.warnings;
}

}  // namespace

std::vector<std::uint32_t> sed_relation(const Sed& g, const Universe& u) {
  const std::size_t n = u.size();
  std::vector<std::optional<NodeId>> node(n);
  std::vector<std::uint64_t> keys(n);
  for (Universe::Index i = 0; i < n; ++i) {
    const auto& e = u.entry(i);
    switch (e.kind) {
      case Term::Kind::Variable:
        node[i] = g.node_of(u.term(i).name());
        break;
      case Term::Kind::Constant:
        node[i] = g.find_const(u.term(i).value());
        break;
      case Term::Kind::Apply:
        if (node[e.left] && node[e.right]) node[i] = g.find_app(e.op, *node[e.left], *node[e.right]);
        break;
    }
    keys[i] = node[i] ? node[i]->value : (std::uint64_t{1} << 32) + i;
  }
  return canonical_ids(keys);
}

namespace {

// Value keys of the denoted partition: a node id when a node represents the
// term, otherwise a hash-consed key over the operands' keys.
class ClosureKeys {
 public:
  explicit ClosureKeys(const Sed& g) : g_(g) {}

  struct Key {
    std::optional<NodeId> node;
    std::uint64_t id;
  };

  Key variable(const std::string& name) {
    if (auto n = g_.node_of(name)) return of(*n);
    return fresh("v" + name);
  }
  Key constant(const Integer& c) {
    if (auto n = g_.find_const(c)) return of(*n);
    return fresh("c" + c.str());
  }
  Key apply(Op op, const Key& l, const Key& r) {
    if (l.node && r.node) {
      if (auto n = g_.find_app(op, *l.node, *r.node)) return of(*n);
    }
    return fresh(std::string(1, op_symbol(op)) + std::to_string(l.id) + "," + std::to_string(r.id));
  }
  Key term(const Term& t) {
    switch (t.kind()) {
      case Term::Kind::Variable:
        return variable(t.name());
      case Term::Kind::Constant:
        return constant(t.value());
      case Term::Kind::Apply:
        return apply(t.op(), term(t.left()), term(t.right()));
    }
    return fresh("?");
  }

 private:
  Key of(NodeId n) const { return Key{n, n.value}; }
  Key fresh(std::string sig) {
    auto [it, inserted] = fresh_.emplace(std::move(sig), (std::uint64_t{1} << 32) + fresh_.size());
    return Key{std::nullopt, it->second};
  }

  const Sed& g_;
  std::unordered_map<std::string, std::uint64_t> fresh_;
};

}  // namespace

std::vector<std::uint32_t> sed_closure_relation(const Sed& g, const Universe& u) {
  ClosureKeys ck(g);
  std::vector<ClosureKeys::Key> key(u.size());
  std::vector<std::uint64_t> ids(u.size());
  for (Universe::Index i = 0; i < u.size(); ++i) {
    const auto& e = u.entry(i);
    switch (e.kind) {
      case Term::Kind::Variable:
        key[i] = ck.variable(u.term(i).name());
        break;
      case Term::Kind::Constant:
        key[i] = ck.constant(u.term(i).value());
        break;
      case Term::Kind::Apply:
        key[i] = ck.apply(e.op, key[e.left], key[e.right]);
        break;
    }
    ids[i] = key[i].id;
  }
  return canonical_ids(ids);
}

bool sed_closure_equiv(const Sed& g, const Term& t1, const Term& t2) {
  ClosureKeys ck(g);
  return ck.term(t1).id == ck.term(t2).id;
}

bool relation_subset(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  if (a.size() != b.size()) return false;
  std::unordered_map<std::uint32_t, std::uint32_t> image;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto [it, inserted] = image.emplace(a[i], b[i]);
    if (!inserted && it->second != b[i]) return false;
  }
  return true;
}

AnalysisResult AnalysisResult::run(const Program& program, Algo algo, const AnalysisOptions& options) {
  AnalysisResult r;
  r.algo_ = algo;
  r.cfg_ = Cfg::build(program);
  r.spec_ = TermUniverse::of(program, options.max_term_size);
  r.universe_cap_ = options.universe_cap;
  r.s_prime_ = options.s_prime.value_or(r.cfg_.program_point_count());
  r.joins_ = JoinRecorder(options.instrument);
  if (options.universe && options.universe->spec().bound == r.spec_.bound) r.universe_ = options.universe;

  if (algo == Algo::Kildall) {
    KildallAnalysis a(r.universe_ptr());
    auto f = run_fixpoint(r.cfg_, a, options.fixpoint);
    collect(f, r.states_, r.iterations_, r.warnings_);
  } else {
    SedAnalysis a(r.cfg_.variables(), r.s_prime_, algo == Algo::SedOriginal, &r.joins_);
    auto f = run_fixpoint(r.cfg_, a, options.fixpoint);
    collect(f, r.states_, r.iterations_, r.warnings_);
  }
  return r;
}

const AnalysisState& AnalysisResult::state(std::string_view point) const {
  for (const auto& [name, s] : states_) {
    if (name == point) return s;
  }
  if (cfg_.has_point(point)) throw UnknownPointError("program point '" + std::string(point) + "' is unreachable");
  throw UnknownPointError("unknown program point '" + std::string(point) + "'");
}

const Universe& AnalysisResult::universe() const { return *universe_ptr(); }

std::shared_ptr<const Universe> AnalysisResult::universe_ptr() const {
  if (!universe_) universe_ = Universe::build(spec_, universe_cap_);
  return universe_;
}

std::vector<std::uint32_t> AnalysisResult::relation(std::string_view point, Relation rel) const {
  const AnalysisState& s = state(point);
  if (const auto* p = std::get_if<StructuredPartition>(&s)) return p->class_ids();
  const Sed& g = std::get<Sed>(s);
  return rel == Relation::Node ? sed_relation(g, universe()) : sed_closure_relation(g, universe());
}

bool AnalysisResult::equiv(std::string_view point, const Term& t1, const Term& t2, Relation rel) const {
  const AnalysisState& s = state(point);
  if (const auto* p = std::get_if<StructuredPartition>(&s)) return kildall_equiv(*p, t1, t2);
  const Sed& g = std::get<Sed>(s);
  if (rel == Relation::Closure) return sed_closure_equiv(g, t1, t2);
  auto n1 = locate(g, t1);
  return n1 && n1 == locate(g, t2);
}

AvailabilityAnswer AnalysisResult::available(std::string_view point, const Term& t) const {
  AvailabilityAnswer ans{std::string(point), t, false, {}};
  const AnalysisState& s = state(point);
  if (const auto* p = std::get_if<StructuredPartition>(&s)) {
    ans.witness = p->class_members(t);
  } else {
    const Sed& g = std::get<Sed>(s);
    if (auto n = locate(g, t)) ans.witness = terms_of(g, *n, std::max(spec_.bound, t.size()));
  }
  ans.available = std::any_of(ans.witness.begin(), ans.witness.end(),
                              [&](const Term& w) { return w.is_variable() || !(w == t); });
  if (!ans.available) ans.witness.clear();
  return ans;
}

std::vector<std::vector<Term>> AnalysisResult::classes(std::string_view point) const {
  const AnalysisState& s = state(point);
  std::vector<std::vector<Term>> out;
  auto informative = [](const std::vector<Term>& c) { return c.size() >= 2 || (c.size() == 1 && c[0].is_variable()); };
  if (const auto* p = std::get_if<StructuredPartition>(&s)) {
    for (const auto& cls : p->classes()) {
      std::vector<Term> terms;
      for (auto i : cls) terms.push_back(p->universe().term(i));
      if (informative(terms)) out.push_back(std::move(terms));
    }
    return out;
  }
  const Sed& g = std::get<Sed>(s);
  for (std::uint32_t i = 0; i < g.size(); ++i) {
    auto terms = terms_of(g, NodeId{i}, spec_.bound);
    if (informative(terms)) out.push_back(std::move(terms));
  }
  std::sort(out.begin(), out.end(), class_before);
  return out;
}

}  // namespace gvn
