#include "gvn/sed.hpp"

#include <algorithm>
#include <cassert>
#include <tuple>

#include "gvn/error.hpp"

namespace gvn {

namespace {

std::uint64_t app_key(Op op, NodeId l, NodeId r) {
  return (static_cast<std::uint64_t>(op) << 62) | (static_cast<std::uint64_t>(l.value) << 31) | r.value;
}

std::uint64_t pair_key(NodeId a, NodeId b) { return (static_cast<std::uint64_t>(a.value) << 32) | b.value; }

std::vector<std::string> intersect_sorted(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

void insert_sorted(std::vector<std::string>& v, const std::string& s) {
  auto it = std::lower_bound(v.begin(), v.end(), s);
  if (it == v.end() || *it != s) v.insert(it, s);
}

}  // namespace

// ---------------------------------------------------------------------------
// Sed

std::optional<NodeId> Sed::node_of(std::string_view var) const {
  auto it = var_index_.find(var);
  if (it == var_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<NodeId> Sed::find_const(const Integer& value) const {
  auto it = const_index_.find(value);
  if (it == const_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<NodeId> Sed::find_app(Op op, NodeId left, NodeId right) const {
  auto it = app_index_.find(app_key(op, left, right));
  if (it == app_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> Sed::variables() const {
  std::vector<std::string> out;
  for (const auto& [v, _] : var_index_) out.push_back(v);
  return out;
}

std::vector<std::vector<NodeId>> Sed::parents() const {
  std::vector<std::vector<NodeId>> out(nodes_.size());
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    if (const AppType* a = nodes_[i].app()) {
      out[a->left.value].push_back(NodeId{i});
      if (a->right != a->left) out[a->right.value].push_back(NodeId{i});
    }
  }
  return out;
}

std::vector<std::size_t> Sed::heights() const {
  std::vector<std::size_t> h(nodes_.size(), 0);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (const AppType* a = nodes_[i].app()) h[i] = 1 + std::max(h[a->left.value], h[a->right.value]);
  }
  return h;
}

// ---------------------------------------------------------------------------
// SedBuilder

SedBuilder::SedBuilder(const Sed& base)
    : nodes_(base.nodes_), var_index_(base.var_index_), const_index_(base.const_index_), app_index_(base.app_index_) {}

NodeId SedBuilder::add_bottom(std::vector<std::string> vars) {
  NodeId id{static_cast<std::uint32_t>(nodes_.size())};
  std::sort(vars.begin(), vars.end());
  for (const std::string& v : vars) {
    assert(!var_index_.contains(v));
    var_index_.emplace(v, id);
  }
  nodes_.push_back(SedNode{std::move(vars), BottomType{}});
  return id;
}

NodeId SedBuilder::intern_const(const Integer& value) {
  if (auto it = const_index_.find(value); it != const_index_.end()) return it->second;
  NodeId id{static_cast<std::uint32_t>(nodes_.size())};
  nodes_.push_back(SedNode{{}, ConstType{value}});
  const_index_.emplace(value, id);
  return id;
}

NodeId SedBuilder::intern_app(Op op, NodeId left, NodeId right) {
  assert(left.value < nodes_.size() && right.value < nodes_.size());
  auto key = app_key(op, left, right);
  if (auto it = app_index_.find(key); it != app_index_.end()) return it->second;
  NodeId id{static_cast<std::uint32_t>(nodes_.size())};
  nodes_.push_back(SedNode{{}, AppType{op, left, right}});
  app_index_.emplace(key, id);
  return id;
}

std::optional<NodeId> SedBuilder::node_of(std::string_view var) const {
  auto it = var_index_.find(var);
  if (it == var_index_.end()) return std::nullopt;
  return it->second;
}

void SedBuilder::assign_var(const std::string& var, NodeId target) {
  if (auto it = var_index_.find(var); it != var_index_.end()) {
    if (it->second == target) return;
    auto& vars = nodes_[it->second.value].vars;
    vars.erase(std::remove(vars.begin(), vars.end(), var), vars.end());
    var_index_.erase(it);
  }
  add_var(target, var);
}

void SedBuilder::add_var(NodeId node, const std::string& var) {
  assert(!var_index_.contains(var) || var_index_.find(var)->second == node);
  insert_sorted(nodes_[node.value].vars, var);
  var_index_[var] = node;
}

Sed SedBuilder::build() && {
  const std::size_t n = nodes_.size();
  std::vector<bool> alive(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    SedNode& node = nodes_[i];
    if (const AppType* a = node.app(); a && !(alive[a->left.value] && alive[a->right.value])) {
      node.type = BottomType{};
    }
    alive[i] = !node.is_bottom() || !node.anonymous();
  }

  Sed g;
  std::vector<std::uint32_t> remap(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!alive[i]) continue;
    NodeId id{static_cast<std::uint32_t>(g.nodes_.size())};
    remap[i] = id.value;
    SedNode node = std::move(nodes_[i]);
    if (AppType* a = std::get_if<AppType>(&node.type)) {
      a->left = NodeId{remap[a->left.value]};
      a->right = NodeId{remap[a->right.value]};
      g.app_index_.emplace(app_key(a->op, a->left, a->right), id);
    } else if (const ConstType* c = node.constant()) {
      g.const_index_.emplace(c->value, id);
    }
    for (const std::string& v : node.vars) g.var_index_.emplace(v, id);
    g.nodes_.push_back(std::move(node));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Operations

Sed sed_initial(const std::set<std::string>& vars) {
  SedBuilder b;
  for (const std::string& v : vars) b.add_bottom({v});
  return std::move(b).build();
}

namespace {

NodeId materialize(SedBuilder& b, const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Variable:
      if (auto id = b.node_of(t.name())) return *id;
      throw Error("variable '" + t.name() + "' is not tracked by the SED");
    case Term::Kind::Constant:
      return b.intern_const(t.value());
    case Term::Kind::Apply: {
      NodeId l = materialize(b, t.left());
      NodeId r = materialize(b, t.right());
      return b.intern_app(t.op(), l, r);
    }
  }
  throw Error("unreachable term kind");
}

}  // namespace

Sed sed_transfer(const Sed& g, const Statement& s) {
  if (!g.node_of(s.target)) throw Error("variable '" + s.target + "' is not tracked by the SED");
  SedBuilder b(g);
  NodeId rhs = materialize(b, s.rhs);
  b.assign_var(s.target, rhs);
  return std::move(b).build();
}

Sed prune_unnecessary(const Sed& g) {
  // A node survives iff it holds a variable or is reachable from one.
  // Walking parents-first over the reverse topological order settles each
  // node after all of its parents.
  const auto& nodes = g.nodes();
  std::vector<bool> keep(nodes.size(), false);
  for (std::size_t i = nodes.size(); i-- > 0;) {
    if (!nodes[i].anonymous()) keep[i] = true;
    if (!keep[i]) continue;
    if (const AppType* a = nodes[i].app()) {
      keep[a->left.value] = true;
      keep[a->right.value] = true;
    }
  }
  SedBuilder b;
  std::vector<NodeId> remap(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!keep[i]) continue;
    const SedNode& n = nodes[i];
    NodeId id;
    if (const AppType* a = n.app()) {
      id = b.intern_app(a->op, remap[a->left.value], remap[a->right.value]);
    } else if (const ConstType* c = n.constant()) {
      id = b.intern_const(c->value);
    } else {
      id = b.add_bottom({});
    }
    for (const std::string& v : n.vars) b.add_var(id, v);
    remap[i] = id;
  }
  return std::move(b).build();
}

std::optional<NodeId> Intersector::intersect(NodeId n1, NodeId n2, std::size_t counter) {
  auto key = pair_key(n1, n2);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  ++depth_;
  stats_.max_depth = std::max(stats_.max_depth, depth_);
  ++stats_.evaluations;
  auto result = evaluate(n1, n2, counter);
  --depth_;
  memo_.emplace(key, result);
  return result;
}

std::optional<NodeId> Intersector::evaluate(NodeId n1, NodeId n2, std::size_t counter) {
  const SedNode& a = g1_.node(n1);
  const SedNode& b = g2_.node(n2);
  std::vector<std::string> vars = intersect_sorted(a.vars, b.vars);

  std::optional<NodeId> structural;
  if (counter == 0) {
    if (!a.is_bottom() && !b.is_bottom()) ++stats_.budget_exhaustions;
  } else if (const ConstType* ca = a.constant()) {
    const ConstType* cb = b.constant();
    if (cb && cb->value == ca->value) structural = out_.intern_const(ca->value);
  } else if (const AppType* aa = a.app()) {
    const AppType* ab = b.app();
    if (ab && ab->op == aa->op) {
      if (counter < 2) {
        ++stats_.budget_exhaustions;
      } else {
        auto l = intersect(aa->left, ab->left, counter - 1);
        auto r = l ? intersect(aa->right, ab->right, counter - 1) : std::nullopt;
        if (l && r) structural = out_.intern_app(aa->op, *l, *r);
      }
    }
  }

  if (structural) {
    for (const std::string& v : vars) out_.add_var(*structural, v);
    return structural;
  }
  if (vars.empty()) return std::nullopt;
  return out_.add_bottom(std::move(vars));
}

std::optional<NodeId> intersect(const Sed& g1, NodeId n1, const Sed& g2, NodeId n2, std::size_t counter,
                                SedBuilder& out) {
  Intersector in(g1, g2, out);
  return in.intersect(n1, n2, counter);
}

namespace {

class TermEnumerator {
 public:
  TermEnumerator(const Sed& g) : g_(g) {}

  // Terms of exactly `size` represented by `n`.
  const std::vector<Term>& exact(NodeId n, std::size_t size) {
    auto key = std::make_pair(n.value, size);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<Term> out;
    const SedNode& node = g_.node(n);
    if (size == 0) {
      for (const std::string& v : node.vars) out.push_back(Term::variable(v));
      if (const ConstType* c = node.constant()) out.push_back(Term::constant(c->value));
    } else if (const AppType* a = node.app()) {
      for (std::size_t ls = 0; ls < size; ++ls) {
        const auto& lefts = exact(a->left, ls);
        if (lefts.empty()) continue;
        const auto& rights = exact(a->right, size - 1 - ls);
        for (const Term& l : lefts) {
          for (const Term& r : rights) out.push_back(Term::apply(a->op, l, r));
        }
      }
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

 private:
  const Sed& g_;
  std::map<std::pair<std::uint32_t, std::size_t>, std::vector<Term>> memo_;
};

}  // namespace

std::vector<Term> terms_of(const Sed& g, NodeId n, std::size_t max_size) {
  TermEnumerator en(g);
  std::vector<Term> out;
  for (std::size_t s = 0; s <= max_size; ++s) {
    const auto& terms = en.exact(n, s);
    out.insert(out.end(), terms.begin(), terms.end());
  }
  std::sort(out.begin(), out.end(), CanonicalLess{});
  return out;
}

std::optional<NodeId> locate(const Sed& g, const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Variable:
      return g.node_of(t.name());
    case Term::Kind::Constant:
      return g.find_const(t.value());
    case Term::Kind::Apply: {
      auto l = locate(g, t.left());
      if (!l) return std::nullopt;
      auto r = locate(g, t.right());
      if (!r) return std::nullopt;
      return g.find_app(t.op(), *l, *r);
    }
  }
  return std::nullopt;
}

bool sed_equiv(const Sed& g, const Term& t1, const Term& t2, std::size_t max_size) {
  if (t1.size() > max_size || t2.size() > max_size) return false;
  auto n1 = locate(g, t1);
  return n1 && n1 == locate(g, t2);
}

std::vector<NodeId> canonical_order(const Sed& g) {
  const auto& nodes = g.nodes();
  const auto heights = g.heights();
  std::vector<std::uint32_t> canon(nodes.size(), 0);
  std::vector<NodeId> order(nodes.size());
  for (std::uint32_t i = 0; i < nodes.size(); ++i) order[i] = NodeId{i};

  // Children always have a smaller height, so sorting height by height
  // only ever compares children whose canonical ids are already known.
  auto key = [&](NodeId id) {
    const SedNode& n = nodes[id.value];
    std::uint32_t l = 0, r = 0;
    int op = -1;
    std::string cval;
    if (const AppType* a = n.app()) {
      op = static_cast<int>(a->op);
      l = canon[a->left.value];
      r = canon[a->right.value];
    } else if (const ConstType* c = n.constant()) {
      cval = c->value.str();
    }
    return std::make_tuple(heights[id.value], n.vars, n.type.index(), cval.size(), cval, op, l, r);
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return heights[a.value] < heights[b.value]; });
  std::size_t start = 0;
  while (start < order.size()) {
    std::size_t end = start;
    while (end < order.size() && heights[order[end].value] == heights[order[start].value]) ++end;
    std::sort(order.begin() + start, order.begin() + end, [&](NodeId a, NodeId b) { return key(a) < key(b); });
    for (std::size_t k = start; k < end; ++k) canon[order[k].value] = static_cast<std::uint32_t>(k);
    start = end;
  }
  return order;
}

bool isomorphic(const Sed& a, const Sed& b) {
  if (a.size() != b.size()) return false;
  auto oa = canonical_order(a);
  auto ob = canonical_order(b);
  std::vector<std::uint32_t> ca(a.size()), cb(b.size());
  for (std::uint32_t k = 0; k < oa.size(); ++k) {
    ca[oa[k].value] = k;
    cb[ob[k].value] = k;
  }
  for (std::size_t k = 0; k < oa.size(); ++k) {
    const SedNode& x = a.node(oa[k]);
    const SedNode& y = b.node(ob[k]);
    if (x.vars != y.vars || x.type.index() != y.type.index()) return false;
    if (const ConstType* c = x.constant()) {
      if (c->value != y.constant()->value) return false;
    } else if (const AppType* p = x.app()) {
      const AppType* q = y.app();
      if (p->op != q->op || ca[p->left.value] != cb[q->left.value] || ca[p->right.value] != cb[q->right.value]) {
        return false;
      }
    }
  }
  return true;
}

std::string type_string(const NodeType& t) {
  if (const ConstType* c = std::get_if<ConstType>(&t)) return c->value.str();
  if (const AppType* a = std::get_if<AppType>(&t)) return std::string(1, op_symbol(a->op));
  return "⊥";
}

std::string node_label(const SedNode& n) {
  std::string vars;
  for (std::size_t k = 0; k < n.vars.size(); ++k) {
    if (k) vars += ",";
    vars += n.vars[k];
  }
  return "⟨" + (vars.empty() ? std::string(" ") : vars + " ") + "| " + type_string(n.type) + "⟩";
}

std::string render_sed(const Sed& g) {
  auto order = canonical_order(g);
  std::vector<std::uint32_t> canon(g.size());
  for (std::uint32_t k = 0; k < order.size(); ++k) canon[order[k].value] = k;
  std::string out;
  for (std::uint32_t k = 0; k < order.size(); ++k) {
    const SedNode& n = g.node(order[k]);
    out += "#" + std::to_string(k) + " " + node_label(n);
    if (const AppType* a = n.app()) {
      out += " (#" + std::to_string(canon[a->left.value]) + ", #" + std::to_string(canon[a->right.value]) + ")";
    }
    out += "\n";
  }
  return out;
}

std::string to_dot(const Sed& g, std::string_view name) {
  auto order = canonical_order(g);
  std::vector<std::uint32_t> canon(g.size());
  for (std::uint32_t k = 0; k < order.size(); ++k) canon[order[k].value] = k;
  std::string out = "digraph " + std::string(name) + " {\n  node [shape=record];\n";
  for (std::uint32_t k = 0; k < order.size(); ++k) {
    out += "  n" + std::to_string(k) + " [label=\"" + node_label(g.node(order[k])) + "\"];\n";
  }
  for (std::uint32_t k = 0; k < order.size(); ++k) {
    if (const AppType* a = g.node(order[k]).app()) {
      out += "  n" + std::to_string(k) + " -> n" + std::to_string(canon[a->left.value]) + " [label=\"L\"];\n";
      out += "  n" + std::to_string(k) + " -> n" + std::to_string(canon[a->right.value]) + " [label=\"R\"];\n";
    }
  }
  out += "}\n";
  return out;
}

}  // namespace gvn
