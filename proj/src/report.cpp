#include "gvn/report.hpp"

#include <algorithm>
#include <map>

#include "gvn/error.hpp"

namespace gvn {

std::string render_class(const std::vector<Term>& cls) {
  std::string out = "[";
  for (std::size_t k = 0; k < cls.size(); ++k) {
    if (k) out += ", ";
    out += cls[k].to_string();
  }
  return out + "]";
}

std::string render_classes(const std::vector<std::vector<Term>>& classes) {
  if (classes.empty()) return "{}";
  std::string out = "{";
  for (std::size_t k = 0; k < classes.size(); ++k) out += (k ? ", " : " ") + render_class(classes[k]);
  return out + " }";
}

namespace {

Json terms_json(const std::vector<Term>& terms) {
  Json a = Json::array();
  for (const Term& t : terms) a.push_back(t.to_string());
  return a;
}

Json nodes_json(const Sed& g) {
  auto order = canonical_order(g);
  std::vector<std::uint32_t> canon(g.size());
  for (std::uint32_t k = 0; k < order.size(); ++k) canon[order[k].value] = k;
  Json nodes = Json::array();
  for (NodeId id : order) {
    const SedNode& n = g.node(id);
    Json children = Json::array();
    if (const AppType* a = n.app()) {
      children.push_back(canon[a->left.value]);
      children.push_back(canon[a->right.value]);
    }
    nodes.push_back(Json{{"vars", n.vars}, {"type", type_string(n.type)}, {"children", children}});
  }
  return nodes;
}

}  // namespace

Json instrumentation_json(const AnalysisResult& r, const Program& program) {
  const std::size_t e = program.distinct_expressions();
  Json j{{"intersect_calls", 0}, {"bound_e_squared", e * e}, {"recursion_depth_max", 0}};
  if (r.algo() != Algo::Kildall && r.joins().enabled()) {
    j["intersect_calls"] = r.joins().max_intersect_calls();
    j["recursion_depth_max"] = r.joins().max_depth();
    j["joins"] = r.joins().joins().size();
  }
  j["s_prime"] = r.s_prime();
  j["iterations"] = r.iterations();
  return j;
}

Json point_json(const AnalysisResult& r, std::string_view point, const Program& program) {
  Json j{{"point", point}, {"algo", algo_name(r.algo())}};
  Json classes = Json::array();
  for (const auto& cls : r.classes(point)) classes.push_back(terms_json(cls));
  j["classes"] = classes;
  if (const Sed* g = std::get_if<Sed>(&r.state(point))) j["nodes"] = nodes_json(*g);
  j["instrumentation"] = instrumentation_json(r, program);
  return j;
}

std::string point_text(const AnalysisResult& r, std::string_view point) {
  std::string out = std::string(point) + " [" + std::string(algo_name(r.algo())) + "]\n";
  out += "  classes: " + render_classes(r.classes(point)) + "\n";
  if (const Sed* g = std::get_if<Sed>(&r.state(point))) {
    out += "  nodes:\n";
    std::string body = render_sed(*g);
    std::size_t start = 0;
    while (start < body.size()) {
      std::size_t end = body.find('\n', start);
      out += "    " + body.substr(start, end - start) + "\n";
      start = end + 1;
    }
  }
  return out;
}

Json availability_json(const AvailabilityAnswer& a, Algo algo) {
  Json j{{"point", a.point}, {"algo", algo_name(algo)}, {"expr", a.term.to_string()}, {"available", a.available}};
  j["witness"] = a.available ? Json(terms_json(a.witness)) : Json(nullptr);
  return j;
}

std::string availability_text(const AvailabilityAnswer& a, Algo algo) {
  std::string out = a.term.to_string() + " at " + a.point + " [" + std::string(algo_name(algo)) + "]: ";
  if (!a.available) return out + "not available\n";
  return out + "available, class " + render_class(a.witness) + "\n";
}

Relation default_relation(Algo a, Algo b) {
  return a == Algo::Kildall || b == Algo::Kildall ? Relation::Closure : Relation::Node;
}

DiffReport diff_at(const AnalysisResult& a, const AnalysisResult& b, std::string_view point, Relation rel) {
  if (a.universe_spec().bound != b.universe_spec().bound) throw Error("diffed analyses use different term bounds");
  DiffReport d{std::string(point), a.algo(), b.algo(), rel, {}, {}};
  const Universe& u = a.universe();
  auto ra = a.relation(point, rel);
  auto rb = b.relation(point, rel);

  // Pairs related on one side only, visited class by class.
  auto one_sided = [&](const std::vector<std::uint32_t>& x, const std::vector<std::uint32_t>& y,
                       std::vector<TermPair>& sink) {
    std::map<std::uint32_t, std::vector<Universe::Index>> by_class;
    for (Universe::Index i = 0; i < x.size(); ++i) by_class[x[i]].push_back(i);
    for (const auto& [cls, members] : by_class) {
      for (std::size_t p = 0; p < members.size(); ++p) {
        for (std::size_t q = p + 1; q < members.size(); ++q) {
          if (y[members[p]] != y[members[q]]) sink.emplace_back(u.term(members[p]), u.term(members[q]));
        }
      }
    }
    std::sort(sink.begin(), sink.end(), [](const TermPair& l, const TermPair& r) {
      auto c = canonical_compare(l.first, r.first);
      return c != 0 ? c < 0 : canonical_compare(l.second, r.second) < 0;
    });
  };
  one_sided(ra, rb, d.only_in_a);
  one_sided(rb, ra, d.only_in_b);

  for (const auto& [t1, t2] : d.only_in_a) {
    if (!a.equiv(point, t1, t2, rel) || b.equiv(point, t1, t2, rel)) throw Error("diff pair failed re-verification");
  }
  for (const auto& [t1, t2] : d.only_in_b) {
    if (a.equiv(point, t1, t2, rel) || !b.equiv(point, t1, t2, rel)) throw Error("diff pair failed re-verification");
  }
  return d;
}

namespace {

Json pairs_json(const std::vector<TermPair>& pairs) {
  Json a = Json::array();
  for (const auto& [t1, t2] : pairs) a.push_back(Json::array({t1.to_string(), t2.to_string()}));
  return a;
}

std::string pairs_text(const std::vector<TermPair>& pairs) {
  std::string out;
  for (const auto& [t1, t2] : pairs) out += "    " + t1.to_string() + " == " + t2.to_string() + "\n";
  return out;
}

}  // namespace

Json diff_json(const DiffReport& d) {
  return Json{{"point", d.point},
              {"algo_a", algo_name(d.algo_a)},
              {"algo_b", algo_name(d.algo_b)},
              {"relation", d.relation == Relation::Node ? "node" : "closure"},
              {"pairs_only_in_a", pairs_json(d.only_in_a)},
              {"pairs_only_in_b", pairs_json(d.only_in_b)}};
}

std::string diff_text(const DiffReport& d) {
  std::string a(algo_name(d.algo_a));
  std::string b(algo_name(d.algo_b));
  std::string out = d.point + ": " + a + " vs " + b + "\n";
  out += "  only in " + a + " (" + std::to_string(d.only_in_a.size()) + "):\n" + pairs_text(d.only_in_a);
  out += "  only in " + b + " (" + std::to_string(d.only_in_b.size()) + "):\n" + pairs_text(d.only_in_b);
  return out;
}

}  // namespace gvn
