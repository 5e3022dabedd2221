#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "gvn/program.hpp"
#include "gvn/universe.hpp"

namespace gvn {

using Warnings = std::vector<std::string>;

// Kildall's optimizing pool over a bounded term universe: a partition of
// the universe into disjoint equivalence classes closed under congruence.
//
// Stored as one class id per universe index. Ids are canonical (numbered by
// first occurrence in universe order), so two partitions are equal iff
// their id vectors are equal.
class StructuredPartition {
 public:
  using ClassId = std::uint32_t;

  StructuredPartition(std::shared_ptr<const Universe> universe, std::vector<ClassId> class_of);

  const Universe& universe() const { return *universe_; }
  const std::shared_ptr<const Universe>& universe_ptr() const { return universe_; }
  const std::vector<ClassId>& class_ids() const { return class_of_; }
  ClassId class_of(Universe::Index i) const { return class_of_[i]; }
  std::size_t class_count() const { return class_count_; }

  // Classes as universe indices; members in canonical order, classes
  // ordered by (cardinality, first member).
  std::vector<std::vector<Universe::Index>> classes() const;

  // Class members of `t`, in canonical order. Throws UnknownTermError.
  std::vector<Term> class_members(const Term& t) const;

  friend bool operator==(const StructuredPartition& a, const StructuredPartition& b) {
    return a.class_of_ == b.class_of_;
  }

 private:
  std::shared_ptr<const Universe> universe_;
  std::vector<ClassId> class_of_;
  std::size_t class_count_ = 0;
};

// Every term in its own class: no equivalences at entry.
StructuredPartition kildall_initial(std::shared_ptr<const Universe> universe);

// Assignment `s.target := s.rhs`. A term t is placed in the old class of
// t[target := rhs]; terms whose substituted form has no class in the old
// partition get fresh classes, shared between congruent ones. If the rhs is
// outside the universe the target gets a fresh singleton class and a
// warning is appended to `warnings` (when given).
StructuredPartition kildall_transfer(const StructuredPartition& p, const Statement& s, Warnings* warnings = nullptr);

// Non-empty pairwise intersections of the classes of p1 and p2.
StructuredPartition kildall_meet(const StructuredPartition& p1, const StructuredPartition& p2);

// Throws UnknownTermError when either term is outside the universe.
bool kildall_equiv(const StructuredPartition& p, const Term& t1, const Term& t2);

// `{ [c], [d], [x, 1], ... }`. With `only_informative`, singleton classes
// that hold no variable are omitted.
std::string render_partition(const StructuredPartition& p, bool only_informative = true);

}  // namespace gvn
