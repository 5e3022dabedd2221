#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "gvn/program.hpp"
#include "gvn/term.hpp"

namespace gvn {

inline constexpr std::size_t kDefaultUniverseCap = 1'000'000;

// The finite set of terms over (variables ∪ constants, operators) whose
// size is at most `bound`.
struct TermUniverse {
  std::size_t bound = 1;
  std::set<std::string> variables;
  std::set<Integer> constants;
  std::set<Op> operators;

  // Symbols of `program`; the bound defaults to its largest right-hand side.
  static TermUniverse of(const Program& program, std::optional<std::size_t> bound = std::nullopt);
};

// Number of terms in the universe, saturating at UINT64_MAX.
std::uint64_t universe_count(const TermUniverse& u);

// All terms of size <= bound in canonical order (see canonical_compare).
// Throws CapacityError when the universe holds more than `cap` terms.
std::vector<Term> enumerate_universe(const TermUniverse& u, std::size_t cap = kDefaultUniverseCap);

// Indexed form of an enumerated universe. Index order is canonical order,
// so every Apply entry's children have smaller indices.
class Universe {
 public:
  using Index = std::uint32_t;

  struct Entry {
    Term::Kind kind;
    Op op = Op::Add;
    Index left = 0;
    Index right = 0;
  };

  static std::shared_ptr<const Universe> build(const TermUniverse& spec, std::size_t cap = kDefaultUniverseCap);

  std::size_t size() const { return terms_.size(); }
  const TermUniverse& spec() const { return spec_; }
  const Term& term(Index i) const { return terms_[i]; }
  const Entry& entry(Index i) const { return entries_[i]; }
  const std::vector<Term>& terms() const { return terms_; }

  std::optional<Index> index_of(const Term& t) const;
  // Like index_of, but throws UnknownTermError.
  Index require(const Term& t) const;

 private:
  TermUniverse spec_;
  std::vector<Term> terms_;
  std::vector<Entry> entries_;
  std::unordered_map<Term, Index, TermHash> index_;
};

}  // namespace gvn
