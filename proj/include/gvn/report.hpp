#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gvn/analysis.hpp"
#include "gvn/program.hpp"

namespace gvn {

using Json = nlohmann::ordered_json;

// `{ [c], [d], [x, 1], [x+y, x+2, 1+y, 1+2] }`
std::string render_classes(const std::vector<std::vector<Term>>& classes);
std::string render_class(const std::vector<Term>& cls);

// {"intersect_calls", "bound_e_squared", "recursion_depth_max", ...}.
// intersect_calls is the largest count over all joins of the run.
Json instrumentation_json(const AnalysisResult& r, const Program& program);

Json point_json(const AnalysisResult& r, std::string_view point, const Program& program);
std::string point_text(const AnalysisResult& r, std::string_view point);

Json availability_json(const AvailabilityAnswer& a, Algo algo);
std::string availability_text(const AvailabilityAnswer& a, Algo algo);

using TermPair = std::pair<Term, Term>;

struct DiffReport {
  std::string point;
  Algo algo_a = Algo::Kildall;
  Algo algo_b = Algo::Kildall;
  Relation relation = Relation::Node;
  std::vector<TermPair> only_in_a;  // canonical order, first < second
  std::vector<TermPair> only_in_b;

  bool empty() const { return only_in_a.empty() && only_in_b.empty(); }
};

// Node relations when both sides are SEDs, denoted partitions when a
// Kildall partition is involved.
Relation default_relation(Algo a, Algo b);

// Term pairs of the bounded universe equivalent under one analysis but not
// the other. Both results must share a universe bound. Every listed pair is
// re-checked with both analyses' equiv queries.
DiffReport diff_at(const AnalysisResult& a, const AnalysisResult& b, std::string_view point, Relation rel);
inline DiffReport diff_at(const AnalysisResult& a, const AnalysisResult& b, std::string_view point) {
  return diff_at(a, b, point, default_relation(a.algo(), b.algo()));
}

Json diff_json(const DiffReport& d);
std::string diff_text(const DiffReport& d);

}  // namespace gvn
