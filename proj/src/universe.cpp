#include "gvn/universe.hpp"

#include <limits>

#include "gvn/error.hpp"

namespace gvn {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > kSaturated - b ? kSaturated : a + b; }

std::vector<std::uint64_t> counts_by_size(const TermUniverse& u) {
  std::vector<std::uint64_t> n(u.bound + 1, 0);
  n[0] = u.variables.size() + u.constants.size();
  for (std::size_t s = 1; s <= u.bound; ++s) {
    std::uint64_t pairs = 0;
    for (std::size_t ls = 0; ls < s; ++ls) pairs = sat_add(pairs, sat_mul(n[ls], n[s - 1 - ls]));
    n[s] = sat_mul(pairs, u.operators.size());
  }
  return n;
}

}  // namespace

TermUniverse TermUniverse::of(const Program& program, std::optional<std::size_t> bound) {
  TermUniverse u;
  u.bound = bound.value_or(program.max_term_size());
  u.variables = program.variables();
  u.constants = program.constants();
  u.operators = program.operators();
  return u;
}

std::uint64_t universe_count(const TermUniverse& u) {
  std::uint64_t total = 0;
  for (std::uint64_t n : counts_by_size(u)) total = sat_add(total, n);
  return total;
}

std::vector<Term> enumerate_universe(const TermUniverse& u, std::size_t cap) {
  return Universe::build(u, cap)->terms();
}

std::shared_ptr<const Universe> Universe::build(const TermUniverse& spec, std::size_t cap) {
  std::uint64_t total = universe_count(spec);
  if (total > cap) {
    throw CapacityError("term universe of size bound " + std::to_string(spec.bound) + " holds " +
                        (total == kSaturated ? std::string("more than 2^64") : std::to_string(total)) +
                        " terms, above the cap of " + std::to_string(cap) + "; lower the maximum term size");
  }
  auto u = std::make_shared<Universe>();
  u->spec_ = spec;
  u->terms_.reserve(total);
  u->entries_.reserve(total);

  // by_size[s] lists the indices of size-s terms, in canonical order.
  std::vector<std::vector<Index>> by_size(spec.bound + 1);
  auto push = [&](Term t, Entry e, std::size_t s) {
    Index i = static_cast<Index>(u->terms_.size());
    u->index_.emplace(t, i);
    u->terms_.push_back(std::move(t));
    u->entries_.push_back(e);
    by_size[s].push_back(i);
  };
  for (const std::string& v : spec.variables) push(Term::variable(v), Entry{Term::Kind::Variable}, 0);
  for (const Integer& c : spec.constants) push(Term::constant(c), Entry{Term::Kind::Constant}, 0);

  for (std::size_t s = 1; s <= spec.bound; ++s) {
    // Ordered by (left, op, right): left ranges over every smaller size in
    // index order, which is already canonical.
    for (std::size_t li = 0, n = u->terms_.size(); li < n; ++li) {
      Index l = static_cast<Index>(li);
      std::size_t ls = u->terms_[l].size();
      if (ls >= s) break;
      for (Op op : spec.operators) {
        for (Index r : by_size[s - 1 - ls]) {
          Term t = Term::apply(op, u->terms_[l], u->terms_[r]);
          push(std::move(t), Entry{Term::Kind::Apply, op, l, r}, s);
        }
      }
    }
  }
  return u;
}

std::optional<Universe::Index> Universe::index_of(const Term& t) const {
  auto it = index_.find(t);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Universe::Index Universe::require(const Term& t) const {
  if (auto i = index_of(t)) return *i;
  throw UnknownTermError("term '" + t.to_string() + "' is not in the term universe (bound " +
                         std::to_string(spec_.bound) + ")");
}

}  // namespace gvn
