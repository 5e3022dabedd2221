#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "gvn/cfg.hpp"
#include "gvn/dataflow.hpp"
#include "gvn/join.hpp"
#include "gvn/kildall.hpp"
#include "gvn/sed.hpp"
#include "gvn/universe.hpp"

namespace gvn {

enum class Algo { Kildall, SedOriginal, SedModified };

inline constexpr std::array<Algo, 3> kAllAlgos = {Algo::Kildall, Algo::SedOriginal, Algo::SedModified};

std::string_view algo_name(Algo algo);
// Accepts "kildall", "sed-original", "sed-modified". Throws Error.
Algo parse_algo(std::string_view name);

class KildallAnalysis {
 public:
  using State = StructuredPartition;

  explicit KildallAnalysis(std::shared_ptr<const Universe> universe) : universe_(std::move(universe)) {}

  State initial() const { return kildall_initial(universe_); }
  State transfer(const State& s, const Statement& st, Warnings& w) const { return kildall_transfer(s, st, &w); }
  State join(const State& a, const State& b) const { return kildall_meet(a, b); }
  bool equal(const State& a, const State& b) const { return a == b; }

 private:
  std::shared_ptr<const Universe> universe_;
};

// Both SED pipelines. The original one prunes unnecessary nodes after
// every transfer and join; the modified one never prunes.
class SedAnalysis {
 public:
  using State = Sed;

  SedAnalysis(std::set<std::string> variables, std::size_t s_prime, bool original, JoinRecorder* recorder = nullptr)
      : variables_(std::move(variables)), s_prime_(s_prime), original_(original), recorder_(recorder) {}

  State initial() const { return sed_initial(variables_); }
  State transfer(const State& s, const Statement& st, Warnings& w) const;
  State join(const State& a, const State& b) const;
  bool equal(const State& a, const State& b) const { return isomorphic(a, b); }

  std::size_t s_prime() const { return s_prime_; }

 private:
  std::set<std::string> variables_;
  std::size_t s_prime_;
  bool original_;
  JoinRecorder* recorder_;
};

using AnalysisState = std::variant<StructuredPartition, Sed>;

// How an SED relates terms. Node: both terms are represented by one node.
// Closure: the partition the SED denotes, where a term with no node of its
// own is classified by congruence from its operands. Kildall partitions
// read the same either way.
enum class Relation { Node, Closure };

struct AnalysisOptions {
  std::optional<std::size_t> max_term_size;  // universe bound; defaults to the program's largest rhs
  std::optional<std::size_t> s_prime;        // Intersect budget; defaults to the program point count
  std::size_t universe_cap = kDefaultUniverseCap;
  // Universe of the same program, reused when its bound matches.
  std::shared_ptr<const Universe> universe;
  FixpointOptions fixpoint;
  bool instrument = true;
};

struct AvailabilityAnswer {
  std::string point;
  Term term;
  bool available = false;
  std::vector<Term> witness;  // the class (or node terms) holding `term`
};

// One analysis run over a program, with per-point states and queries.
class AnalysisResult {
 public:
  static AnalysisResult run(const Program& program, Algo algo, const AnalysisOptions& options = {});

  Algo algo() const { return algo_; }
  const Cfg& cfg() const { return cfg_; }
  const TermUniverse& universe_spec() const { return spec_; }
  std::size_t s_prime() const { return s_prime_; }
  std::size_t iterations() const { return iterations_; }
  const Warnings& warnings() const { return warnings_; }
  const JoinRecorder& joins() const { return joins_; }
  const std::vector<std::pair<std::string, AnalysisState>>& states() const { return states_; }

  // Throws UnknownPointError.
  const AnalysisState& state(std::string_view point) const;

  // The bounded universe, enumerated on first use for SED analyses.
  // Throws CapacityError.
  const Universe& universe() const;
  std::shared_ptr<const Universe> universe_ptr() const;

  // Canonical class id per universe term at `point`.
  std::vector<std::uint32_t> relation(std::string_view point, Relation rel = Relation::Node) const;

  // Kildall throws UnknownTermError outside the universe; SED states answer
  // structurally for terms of any size.
  bool equiv(std::string_view point, const Term& t1, const Term& t2, Relation rel = Relation::Node) const;
  AvailabilityAnswer available(std::string_view point, const Term& t) const;

  // Informative classes at `point`, in rendering order.
  std::vector<std::vector<Term>> classes(std::string_view point) const;

 private:
  Algo algo_ = Algo::Kildall;
  Cfg cfg_;
  TermUniverse spec_;
  std::size_t universe_cap_ = kDefaultUniverseCap;
  mutable std::shared_ptr<const Universe> universe_;
  std::size_t s_prime_ = 0;
  std::size_t iterations_ = 0;
  Warnings warnings_;
  JoinRecorder joins_;
  std::vector<std::pair<std::string, AnalysisState>> states_;
};

// Class id per universe term for an SED: terms on the same node share an
// id, terms with no node get singleton ids. Canonically numbered.
std::vector<std::uint32_t> sed_relation(const Sed& g, const Universe& u);

std::vector<std::uint32_t> sed_closure_relation(const Sed& g, const Universe& u);
bool sed_closure_equiv(const Sed& g, const Term& t1, const Term& t2);

// True iff every pair related by `a` is related by `b`.
bool relation_subset(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b);

}  // namespace gvn
