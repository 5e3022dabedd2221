#include "gvn/term.hpp"

#include <cassert>
#include <functional>

#include "gvn/error.hpp"

namespace gvn {

char op_symbol(Op op) {
  switch (op) {
    case Op::Add:
      return '+';
    case Op::Sub:
      return '-';
    case Op::Mul:
      return '*';
    case Op::Div:
      return '/';
  }
  return '?';
}

std::optional<Op> op_from_symbol(char c) {
  switch (c) {
    case '+':
      return Op::Add;
    case '-':
      return Op::Sub;
    case '*':
      return Op::Mul;
    case '/':
      return Op::Div;
    default:
      return std::nullopt;
  }
}

Integer Integer::parse(std::string_view text) {
  if (text.empty()) throw Error("empty integer literal");
  for (char c : text) {
    if (c < '0' || c > '9') throw Error("invalid integer literal '" + std::string(text) + "'");
  }
  std::size_t first = text.find_first_not_of('0');
  Integer out;
  out.digits_ = first == std::string_view::npos ? "0" : std::string(text.substr(first));
  return out;
}

std::strong_ordering operator<=>(const Integer& a, const Integer& b) {
  if (a.digits_.size() != b.digits_.size()) return a.digits_.size() <=> b.digits_.size();
  return a.digits_.compare(b.digits_) <=> 0;
}

struct Term::Node {
  Kind kind;
  std::string name;
  Integer value;
  Op op = Op::Add;
  std::optional<Term> left;
  std::optional<Term> right;
  std::size_t size = 0;
  std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Term Term::variable(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->hash = mix(1, std::hash<std::string>{}(name));
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::constant(Integer value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->hash = mix(2, std::hash<std::string>{}(value.str()));
  n->value = std::move(value);
  return Term(std::move(n));
}

Term Term::apply(Op op, Term left, Term right) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Apply;
  n->op = op;
  n->size = 1 + left.size() + right.size();
  n->hash = mix(mix(mix(3, static_cast<std::size_t>(op)), left.hash()), right.hash());
  n->left = std::move(left);
  n->right = std::move(right);
  return Term(std::move(n));
}

Term::Kind Term::kind() const { return node_->kind; }

const std::string& Term::name() const {
  assert(is_variable());
  return node_->name;
}

const Integer& Term::value() const {
  assert(is_constant());
  return node_->value;
}

Op Term::op() const {
  assert(is_apply());
  return node_->op;
}

const Term& Term::left() const {
  assert(is_apply());
  return *node_->left;
}

const Term& Term::right() const {
  assert(is_apply());
  return *node_->right;
}

std::size_t Term::size() const { return node_->size; }
std::size_t Term::hash() const { return node_->hash; }

bool Term::mentions(std::string_view variable) const {
  switch (kind()) {
    case Kind::Variable:
      return name() == variable;
    case Kind::Constant:
      return false;
    case Kind::Apply:
      return left().mentions(variable) || right().mentions(variable);
  }
  return false;
}

std::string Term::to_string() const {
  switch (kind()) {
    case Kind::Variable:
      return name();
    case Kind::Constant:
      return value().str();
    case Kind::Apply: {
      std::string out = left().to_string();
      out += op_symbol(op());
      if (right().is_apply()) {
        out += '(' + right().to_string() + ')';
      } else {
        out += right().to_string();
      }
      return out;
    }
  }
  return {};
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case Term::Kind::Variable:
      return a.name() == b.name();
    case Term::Kind::Constant:
      return a.value() == b.value();
    case Term::Kind::Apply:
      return a.op() == b.op() && a.left() == b.left() && a.right() == b.right();
  }
  return false;
}

std::strong_ordering canonical_compare(const Term& a, const Term& b) {
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  if (a.kind() != b.kind()) return a.kind() <=> b.kind();
  switch (a.kind()) {
    case Term::Kind::Variable:
      return a.name() <=> b.name();
    case Term::Kind::Constant:
      return a.value() <=> b.value();
    case Term::Kind::Apply:
      if (auto c = canonical_compare(a.left(), b.left()); c != 0) return c;
      if (auto c = a.op() <=> b.op(); c != 0) return c;
      return canonical_compare(a.right(), b.right());
  }
  return std::strong_ordering::equal;
}

}  // namespace gvn
