#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gvn/cfg.hpp"
#include "gvn/error.hpp"
#include "gvn/program.hpp"

namespace gvn {

using Warnings = std::vector<std::string>;

template <class A>
concept Analysis = requires(const A& a, const typename A::State& s, const Statement& st, Warnings& w) {
  { a.initial() } -> std::convertible_to<typename A::State>;
  { a.transfer(s, st, w) } -> std::convertible_to<typename A::State>;
  { a.join(s, s) } -> std::convertible_to<typename A::State>;
  { a.equal(s, s) } -> std::convertible_to<bool>;
};

inline constexpr std::size_t kDefaultMaxVisits = 10'000;

struct FixpointOptions {
  std::size_t max_visits = kDefaultMaxVisits;
  // When set, the next block is drawn at random from the worklist instead
  // of taking the earliest one in reverse post-order.
  std::optional<std::uint64_t> shuffle_seed;
};

template <class State>
struct FixpointResult {
  std::vector<std::optional<State>> block_in;  // empty for unreachable blocks
  std::vector<std::pair<std::string, State>> states;  // one per labeled point, in CFG order
  std::size_t iterations = 0;  // block visits
  Warnings warnings;

  const State& at(std::string_view label) const {
    for (const auto& [name, s] : states) {
      if (name == label) return s;
    }
    throw UnknownPointError("unknown program point '" + std::string(label) + "'");
  }
};

namespace detail {

inline void note(Warnings& out, std::string w) {
  if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(std::move(w));
}

inline std::string block_name(const Cfg& cfg, BlockId b) {
  for (const auto& [name, pos] : cfg.points()) {
    if (pos.block == b) return name;
  }
  return "block " + std::to_string(b);
}

}  // namespace detail

// State just before statement `pos.index` of `pos.block`, given the block's
// entry state.
template <Analysis A>
typename A::State replay(const A& a, const Cfg& cfg, const typename A::State& in, Position pos, Warnings& w) {
  typename A::State s = in;
  const auto& stmts = cfg.block(pos.block).statements;
  for (std::size_t i = 0; i < pos.index && i < stmts.size(); ++i) s = a.transfer(s, stmts[i], w);
  return s;
}

// Worklist iteration to a fixpoint. Join blocks fold the out-states of
// their already-visited predecessors pairwise, in predecessor order.
template <Analysis A>
FixpointResult<typename A::State> run_fixpoint(const Cfg& cfg, const A& a, const FixpointOptions& opts = {}) {
  using State = typename A::State;
  const std::size_t n = cfg.blocks().size();
  FixpointResult<State> r;
  r.block_in.resize(n);
  std::vector<std::optional<State>> out(n);

  std::vector<std::size_t> rank(n, n);
  auto rpo = cfg.reverse_post_order();
  for (std::size_t k = 0; k < rpo.size(); ++k) rank[rpo[k]] = k;

  std::set<std::pair<std::size_t, BlockId>> worklist{{rank[cfg.entry()], cfg.entry()}};
  std::optional<std::mt19937_64> rng;
  if (opts.shuffle_seed) rng.emplace(*opts.shuffle_seed);

  while (!worklist.empty()) {
    auto it = worklist.begin();
    if (rng) it = std::next(it, static_cast<std::ptrdiff_t>((*rng)() % worklist.size()));
    BlockId b = it->second;
    worklist.erase(it);
    if (++r.iterations > opts.max_visits) {
      throw DivergenceError("fixpoint did not converge within " + std::to_string(opts.max_visits) +
                            " block visits (at " + detail::block_name(cfg, b) + ")");
    }

    std::optional<State> in;
    if (b == cfg.entry()) in = a.initial();
    for (BlockId p : cfg.block(b).preds) {
      if (!out[p]) continue;
      in = in ? a.join(*in, *out[p]) : *out[p];
    }
    if (!in) continue;
    if (r.block_in[b] && a.equal(*r.block_in[b], *in)) continue;
    r.block_in[b] = std::move(in);

    State s = *r.block_in[b];
    for (const Statement& st : cfg.block(b).statements) s = a.transfer(s, st, r.warnings);
    if (out[b] && a.equal(*out[b], s)) continue;
    out[b] = std::move(s);
    for (BlockId succ : cfg.block(b).succs) worklist.emplace(rank[succ], succ);
  }

  // Points are listed in source order, so within a block each one resumes
  // from the previous point's state.
  Warnings scratch;
  std::vector<std::optional<std::pair<std::size_t, State>>> cursor(n);
  for (const auto& [name, pos] : cfg.points()) {
    if (!r.block_in[pos.block]) continue;
    auto& c = cursor[pos.block];
    if (!c || c->first > pos.index) c.emplace(0, *r.block_in[pos.block]);
    const auto& stmts = cfg.block(pos.block).statements;
    for (; c->first < pos.index && c->first < stmts.size(); ++c->first) {
      c->second = a.transfer(c->second, stmts[c->first], scratch);
    }
    r.states.emplace_back(name, c->second);
  }
  Warnings unique;
  for (auto& w : r.warnings) detail::note(unique, std::move(w));
  r.warnings = std::move(unique);
  return r;
}

}  // namespace gvn
