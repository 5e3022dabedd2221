#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace gvn {

// Uninterpreted binary operator symbols. No arithmetic identities hold
// between them; each symbol is a distinct Herbrand constructor.
enum class Op : std::uint8_t { Add, Sub, Mul, Div };

char op_symbol(Op op);
std::optional<Op> op_from_symbol(char c);

// Arbitrary-precision non-negative integer literal, kept as normalized
// decimal digits. Two constants are the same value iff their digits match.
class Integer {
 public:
  Integer() : digits_("0") {}
  explicit Integer(std::uint64_t v) : digits_(std::to_string(v)) {}

  // Accepts one or more decimal digits; leading zeros are stripped.
  static Integer parse(std::string_view text);

  const std::string& str() const { return digits_; }

  friend bool operator==(const Integer&, const Integer&) = default;
  friend std::strong_ordering operator<=>(const Integer& a, const Integer& b);

 private:
  std::string digits_;
};

// A Herbrand expression: a variable, an integer constant, or an
// uninterpreted binary application. Immutable; copies share structure.
class Term {
 public:
  enum class Kind : std::uint8_t { Variable, Constant, Apply };

  static Term variable(std::string name);
  static Term constant(Integer value);
  static Term constant(std::uint64_t value) { return constant(Integer(value)); }
  static Term apply(Op op, Term left, Term right);

  Kind kind() const;
  bool is_variable() const { return kind() == Kind::Variable; }
  bool is_constant() const { return kind() == Kind::Constant; }
  bool is_apply() const { return kind() == Kind::Apply; }

  // Preconditions: matching kind.
  const std::string& name() const;
  const Integer& value() const;
  Op op() const;
  const Term& left() const;
  const Term& right() const;

  // Number of Apply nodes.
  std::size_t size() const;
  std::size_t hash() const;

  bool mentions(std::string_view variable) const;

  // Infix rendering with a single precedence level, left-associative:
  // only an Apply in right-operand position is parenthesized.
  std::string to_string() const;

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Canonical term order: size first, then variables (by name) before
// constants (by value), then Apply terms by (left, op, right).
std::strong_ordering canonical_compare(const Term& a, const Term& b);

struct CanonicalLess {
  bool operator()(const Term& a, const Term& b) const { return canonical_compare(a, b) < 0; }
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

}  // namespace gvn
