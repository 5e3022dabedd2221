#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "gvn/program.hpp"

namespace gvn {

struct FuzzShape {
  std::size_t max_vars = 10;
  std::size_t max_stmts = 15;
  std::size_t max_joins = 3;
  std::size_t max_term_size = 3;
  bool loops = false;
  // Extra term size for Kildall beyond oracle_bound().
  std::size_t oracle_slack = 0;
  // Programs whose Kildall universe would exceed this many terms are
  // redrawn.
  std::size_t universe_budget = 50000;
};

Program generate_program(std::mt19937_64& rng, const FuzzShape& shape);

// Largest size any variable's value can reach, written over the entry
// values, along any path that runs each loop body at most once.
std::size_t value_size_bound(const Program& program);

// Term bound for the Kildall side of a differential check: the program's
// largest rhs plus `slack`, raised to value_size_bound(). A bounded
// partition loses classes whose every member is larger than its bound;
// covering every value keeps those classes on loop-free programs.
std::size_t oracle_bound(const Program& program, std::size_t slack);

// Copy of `program` with an internal label at every position between
// statements, so that every point can be compared.
Program label_everywhere(const Program& program);

struct Finding {
  std::string kind;   // original-not-subset, modified-differs-from-kildall, ...
  std::string point;
  std::string detail;
};

struct ProgramCheck {
  std::vector<Finding> findings;
  bool strict_gain = false;  // sed-original strictly weaker than sed-modified somewhere
  std::size_t joins = 0;
  std::size_t max_intersect_calls = 0;
  std::size_t max_depth = 0;
  std::size_t e = 0;
  std::size_t s_prime = 0;
};

// Runs all three analyses and checks: sed-original relates no more than
// sed-modified (node and closure relations); the partition sed-modified
// denotes equals Kildall's on loop-free programs and is never coarser
// otherwise; every join stays within e^2 Intersect evaluations and
// recursion depth s'. A strict gain is a point where sed-modified's node
// relation is strictly finer than sed-original's.
ProgramCheck check_program(const Program& program, std::size_t oracle_slack = 0);

// Greedily drops items and shrinks right-hand sides while a finding of
// `kind` persists.
Program minimize(const Program& program, const std::string& kind, std::size_t oracle_slack = 0);

struct FuzzCaseReport {
  std::size_t index = 0;
  Finding finding;
  std::string reproducer;
};

struct FuzzSummary {
  std::uint64_t seed = 0;
  std::size_t count = 0;
  std::size_t loop_free = 0;
  std::size_t joins = 0;
  std::size_t strict_gains = 0;
  std::size_t statements = 0;
  std::vector<std::size_t> by_term_size;  // programs per largest rhs size
  std::size_t max_intersect_calls = 0;
  std::size_t max_depth = 0;
  std::size_t bound_violations = 0;
  std::size_t depth_violations = 0;
  std::vector<FuzzCaseReport> findings;
};

FuzzSummary run_fuzz(std::uint64_t seed, std::size_t count, const FuzzShape& shape = {});

nlohmann::ordered_json fuzz_json(const FuzzSummary& s);
std::string fuzz_text(const FuzzSummary& s);

}  // namespace gvn
