#include "gvn/join.hpp"

#include <algorithm>
#include <tuple>
#include <unordered_map>

#include "gvn/error.hpp"

namespace gvn {

void JoinRecorder::record(const JoinStats& stats) {
  if (enabled_) log_.push_back(stats);
}

const std::vector<JoinStats>& JoinRecorder::joins() const {
  if (!enabled_) throw InstrumentationError("instrumentation disabled");
  return log_;
}

std::size_t JoinRecorder::intersect_call_count() const {
  const auto& log = joins();
  return log.empty() ? 0 : log.back().intersect_calls;
}

std::size_t JoinRecorder::max_intersect_calls() const {
  std::size_t m = 0;
  for (const JoinStats& s : joins()) m = std::max(m, s.intersect_calls);
  return m;
}

std::size_t JoinRecorder::max_depth() const {
  std::size_t m = 0;
  for (const JoinStats& s : joins()) m = std::max(m, s.max_depth);
  return m;
}

namespace {

void check_variables(const Sed& g1, const Sed& g2) {
  if (g1.variables() != g2.variables()) throw Error("joined SEDs hold different variable sets");
}

void fill(JoinStats* stats, const Intersector& in, const Sed& g1, const Sed& g2, const Sed& result) {
  if (!stats) return;
  stats->intersect_calls = in.stats().evaluations;
  stats->max_depth = in.stats().max_depth;
  stats->budget_exhaustions = in.stats().budget_exhaustions;
  stats->left_nodes = g1.size();
  stats->right_nodes = g2.size();
  stats->result_nodes = result.size();
}

}  // namespace

Sed sed_join_original(const Sed& g1, const Sed& g2, std::size_t s_prime, JoinStats* stats) {
  check_variables(g1, g2);
  SedBuilder out;
  Intersector in(g1, g2, out);
  for (const std::string& v : g1.variables()) {
    in.intersect(*g1.node_of(v), *g2.node_of(v), s_prime);
  }
  Sed result = prune_unnecessary(std::move(out).build());
  fill(stats, in, g1, g2, result);
  return result;
}

Sed sed_join_modified(const Sed& g1, const Sed& g2, std::size_t s_prime, JoinStats* stats) {
  check_variables(g1, g2);
  auto h1 = g1.heights();
  auto h2 = g2.heights();
  std::vector<std::tuple<std::size_t, std::uint32_t, std::uint32_t>> pairs;
  for (std::uint32_t a = 0; a < g1.size(); ++a) {
    for (std::uint32_t b = 0; b < g2.size(); ++b) pairs.emplace_back(h1[a] + h2[b], a, b);
  }
  std::sort(pairs.begin(), pairs.end());

  // A pair yields a node only if it shares a variable, or both nodes have
  // the same constructor and, for applications, both child pairs already
  // yielded nodes. Other pairs are never handed to Intersect.
  SedBuilder out;
  Intersector in(g1, g2, out);
  std::unordered_map<std::uint64_t, bool> yielded;
  auto key = [](NodeId a, NodeId b) { return (std::uint64_t{a.value} << 32) | b.value; };
  for (const auto& [h, a, b] : pairs) {
    const SedNode& x = g1.node(NodeId{a});
    const SedNode& y = g2.node(NodeId{b});
    bool shares_var = false;
    for (const std::string& v : x.vars) {
      if (std::binary_search(y.vars.begin(), y.vars.end(), v)) shares_var = true;
    }
    bool structural = false;
    if (const ConstType* c = x.constant()) {
      structural = y.constant() && y.constant()->value == c->value;
    } else if (const AppType* p = x.app()) {
      const AppType* q = y.app();
      structural = q && q->op == p->op && yielded[key(p->left, q->left)] && yielded[key(p->right, q->right)];
    }
    if (!shares_var && !structural) continue;
    yielded[key(NodeId{a}, NodeId{b})] = in.intersect(NodeId{a}, NodeId{b}, s_prime).has_value();
  }
  Sed result = std::move(out).build();
  fill(stats, in, g1, g2, result);
  return result;
}

}  // namespace gvn
