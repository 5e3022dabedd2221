#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "gvn/sed.hpp"

namespace gvn {

struct JoinStats {
  std::size_t intersect_calls = 0;  // distinct memoized (n1, n2) evaluations
  std::size_t max_depth = 0;        // deepest Intersect recursion
  std::size_t budget_exhaustions = 0;
  std::size_t left_nodes = 0;
  std::size_t right_nodes = 0;
  std::size_t result_nodes = 0;
};

// Collects per-join counters. A disabled recorder ignores joins, and
// querying it is an error.
class JoinRecorder {
 public:
  explicit JoinRecorder(bool enabled = true) : enabled_(enabled) {}

  bool enabled() const { return enabled_; }
  void record(const JoinStats& stats);
  void clear() { log_.clear(); }

  const std::vector<JoinStats>& joins() const;
  // Distinct Intersect evaluations of the most recent join; 0 before any
  // join ran. Throws InstrumentationError when disabled.
  std::size_t intersect_call_count() const;
  std::size_t max_intersect_calls() const;
  std::size_t max_depth() const;

 private:
  bool enabled_;
  std::vector<JoinStats> log_;
};

// Variable-targeted join: Intersect(Node_g1(x), Node_g2(x)) for each
// variable x in name order, then prune_unnecessary. Both SEDs must hold the
// same variables.
Sed sed_join_original(const Sed& g1, const Sed& g2, std::size_t s_prime, JoinStats* stats = nullptr);

// Pairwise join: every node pair is intersected, in increasing order of
// combined height so children pairs are settled first with the full
// budget. Pairs whose intersection is certainly empty (no shared variable,
// and different constructors or an empty child pair) are skipped without
// an Intersect call. Anonymous nodes that still represent terms are kept.
Sed sed_join_modified(const Sed& g1, const Sed& g2, std::size_t s_prime, JoinStats* stats = nullptr);

}  // namespace gvn
