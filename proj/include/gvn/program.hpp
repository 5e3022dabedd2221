#pragma once

#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gvn/term.hpp"

namespace gvn {

// `target := rhs`. Right-hand sides keep their nesting; nothing is
// flattened into temporaries.
struct Statement {
  std::string target;
  Term rhs;

  friend bool operator==(const Statement&, const Statement&) = default;
};

struct Label {
  std::string name;

  friend bool operator==(const Label&, const Label&) = default;
};

struct Item;

// `if (*) { ... } else { ... }` with a nondeterministic condition.
struct Branch {
  std::vector<Item> then_body;
  std::vector<Item> else_body;

  friend bool operator==(const Branch&, const Branch&) = default;
};

// `while (*) { ... }`
struct Loop {
  std::vector<Item> body;

  friend bool operator==(const Loop&, const Loop&) = default;
};

struct Item {
  std::variant<Label, Statement, Branch, Loop> node;

  friend bool operator==(const Item&, const Item&) = default;
};

struct Program {
  std::vector<Item> items;

  friend bool operator==(const Program&, const Program&) = default;

  std::set<std::string> variables() const;
  std::set<Integer> constants() const;
  std::set<Op> operators() const;
  std::vector<std::string> labels() const;
  std::vector<Statement> statements() const;
  // Largest right-hand-side size; 0 for programs without Apply terms.
  std::size_t max_term_size() const;
  // Distinct expressions: every subterm of every right-hand side plus
  // every assigned variable.
  std::size_t distinct_expressions() const;
  bool has_loops() const;
};

// Labels and variables may not start with this prefix; the toolkit uses it
// for synthetic point names.
inline constexpr std::string_view kReservedPrefix = "__";
inline constexpr std::string_view kEntryPoint = "__entry";
inline constexpr std::string_view kExitPoint = "__exit";

Program parse_program(std::string_view text);
// Parses a standalone expression such as "x+(y*2)".
Term parse_term(std::string_view text);

std::string print_program(const Program& program);

}  // namespace gvn
