#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "gvn/program.hpp"
#include "gvn/term.hpp"

namespace gvn {

struct NodeId {
  std::uint32_t value = 0;

  friend bool operator==(const NodeId&, const NodeId&) = default;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

// Node types: ⊥ (no structural information), a constant, or a binary
// application over two child nodes of the same SED.
struct BottomType {
  friend bool operator==(const BottomType&, const BottomType&) = default;
};

struct ConstType {
  Integer value;

  friend bool operator==(const ConstType&, const ConstType&) = default;
};

struct AppType {
  Op op;
  NodeId left;
  NodeId right;

  friend bool operator==(const AppType&, const AppType&) = default;
};

using NodeType = std::variant<BottomType, ConstType, AppType>;

struct SedNode {
  std::vector<std::string> vars;  // sorted; empty for anonymous nodes
  NodeType type;

  bool anonymous() const { return vars.empty(); }
  bool is_bottom() const { return std::holds_alternative<BottomType>(type); }
  const AppType* app() const { return std::get_if<AppType>(&type); }
  const ConstType* constant() const { return std::get_if<ConstType>(&type); }
};

// Strong equivalence DAG. Immutable once built; see SedBuilder.
//
// Invariants of every SED produced by this library:
//  - node ids are topologically ordered (children before parents),
//  - every variable is held by exactly one node,
//  - no two nodes are congruent (same constant, or same operator over the
//    same children); ⊥ nodes are never congruent to each other,
//  - no node is empty: each one represents at least one term.
class Sed {
 public:
  std::size_t size() const { return nodes_.size(); }
  const std::vector<SedNode>& nodes() const { return nodes_; }
  const SedNode& node(NodeId id) const { return nodes_.at(id.value); }

  std::optional<NodeId> node_of(std::string_view var) const;
  std::optional<NodeId> find_const(const Integer& value) const;
  std::optional<NodeId> find_app(Op op, NodeId left, NodeId right) const;

  std::vector<std::string> variables() const;
  std::vector<std::vector<NodeId>> parents() const;
  // Longest path to a leaf; leaves have height 0.
  std::vector<std::size_t> heights() const;

 private:
  friend class SedBuilder;

  std::vector<SedNode> nodes_;
  std::map<std::string, NodeId, std::less<>> var_index_;
  std::map<Integer, NodeId> const_index_;
  std::unordered_map<std::uint64_t, NodeId> app_index_;
};

// Mutable construction site for an SED. Constant and application nodes are
// hash-consed on creation. build() restores the non-emptiness invariant:
// an application with a dropped child degrades to ⊥, and anonymous ⊥
// nodes are dropped; the remaining nodes are renumbered in order.
class SedBuilder {
 public:
  SedBuilder() = default;
  explicit SedBuilder(const Sed& base);

  NodeId add_bottom(std::vector<std::string> vars);
  NodeId intern_const(const Integer& value);
  NodeId intern_app(Op op, NodeId left, NodeId right);

  std::optional<NodeId> node_of(std::string_view var) const;
  // Moves `var` onto `target`, removing it from its previous node.
  void assign_var(const std::string& var, NodeId target);
  void add_var(NodeId node, const std::string& var);

  std::size_t size() const { return nodes_.size(); }

  Sed build() &&;

 private:
  std::vector<SedNode> nodes_;
  std::map<std::string, NodeId, std::less<>> var_index_;
  std::map<Integer, NodeId> const_index_;
  std::unordered_map<std::uint64_t, NodeId> app_index_;
};

// One ⊥ node per variable.
Sed sed_initial(const std::set<std::string>& vars);

// `s.target := s.rhs`: the rhs is materialized bottom-up against the
// pre-assignment SED, reusing congruent nodes, and the target moves onto
// the resulting node. The old node of the target stays (possibly now
// anonymous) unless it became empty. Throws Error if the statement
// mentions a variable the SED does not hold.
Sed sed_transfer(const Sed& g, const Statement& s);

// Removes anonymous nodes no variable-holding node depends on: a node is
// unnecessary when all its ancestors, or all its descendants, are
// anonymous, but a child of a retained node is always kept.
Sed prune_unnecessary(const Sed& g);

struct IntersectStats {
  std::size_t evaluations = 0;        // distinct (n1, n2) pairs evaluated
  std::size_t max_depth = 0;          // deepest recursion chain seen
  std::size_t budget_exhaustions = 0; // application pairs cut off by the counter
};

// Memoized recursive intersection of nodes of two SEDs into `out`.
//
// A call with counter c may recurse into children only when c >= 2, so a
// top-level call with counter s' never nests deeper than s' frames. An
// application pair cut off by the budget yields ⊥ with the common variables.
// The result is absent when it would be an anonymous ⊥, which represents
// no term.
class Intersector {
 public:
  Intersector(const Sed& g1, const Sed& g2, SedBuilder& out) : g1_(g1), g2_(g2), out_(out) {}

  std::optional<NodeId> intersect(NodeId n1, NodeId n2, std::size_t counter);
  const IntersectStats& stats() const { return stats_; }

 private:
  std::optional<NodeId> evaluate(NodeId n1, NodeId n2, std::size_t counter);

  const Sed& g1_;
  const Sed& g2_;
  SedBuilder& out_;
  std::unordered_map<std::uint64_t, std::optional<NodeId>> memo_;
  IntersectStats stats_;
  std::size_t depth_ = 0;
};

// Single intersection call with a fresh memo table.
std::optional<NodeId> intersect(const Sed& g1, NodeId n1, const Sed& g2, NodeId n2, std::size_t counter,
                                SedBuilder& out);

// Terms of size <= max_size represented by `n`, in canonical order.
std::vector<Term> terms_of(const Sed& g, NodeId n, std::size_t max_size);

// The unique node representing `t`, if any.
std::optional<NodeId> locate(const Sed& g, const Term& t);

// True iff one node represents both terms (each of size <= max_size).
bool sed_equiv(const Sed& g, const Term& t1, const Term& t2, std::size_t max_size);

// Canonical node order: by height, then variables, then type (children by
// their canonical position). Position k in the result is canonical id k.
std::vector<NodeId> canonical_order(const Sed& g);
bool isomorphic(const Sed& a, const Sed& b);

// "⟨x | 1⟩", "⟨ | +⟩", "⟨d | ⊥⟩"
std::string node_label(const SedNode& n);
std::string type_string(const NodeType& t);

// One line per node in canonical order, children by canonical id.
std::string render_sed(const Sed& g);
std::string to_dot(const Sed& g, std::string_view name = "sed");

}  // namespace gvn
