#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "gvn/sed.hpp"
#include "support/fixtures.hpp"
#include "support/random_sed.hpp"

namespace gvn {
namespace {

using testing::fixture;
using testing::random_sed;
using testing::sed_at;
using testing::strings;
using testing::T;

using Strings = std::vector<std::string>;

Sed straight_line(const std::string& text) {
  Program p = parse_program(text);
  Sed g = sed_initial(p.variables());
  for (const Statement& s : p.statements()) g = sed_transfer(g, s);
  return g;
}

std::vector<Term> sorted_intersection(std::vector<Term> a, std::vector<Term> b) {
  std::vector<Term> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out), CanonicalLess{});
  return out;
}

std::vector<Term> drop_probe(std::vector<Term> ts) {
  std::erase_if(ts, [](const Term& t) { return t.is_variable() && t.name() == "probe"; });
  return ts;
}

TEST(Sed, InitialHasOneBottomPerVariable) {
  Sed g = sed_initial({"x", "y"});
  EXPECT_EQ(render_sed(g), "#0 ⟨x | ⊥⟩\n#1 ⟨y | ⊥⟩\n");
}

TEST(Sed, ThenBranchState) {
  Sed g1 = sed_at(fixture("diamond.gvn"), Algo::SedOriginal, "p1");
  EXPECT_EQ(render_sed(g1),
            "#0 ⟨d | ⊥⟩\n#1 ⟨e | ⊥⟩\n#2 ⟨x | 1⟩\n#3 ⟨y | 2⟩\n#4 ⟨z | 3⟩\n#5 ⟨c | +⟩ (#2, #3)\n");
}

TEST(Sed, ElseBranchState) {
  Sed g2 = sed_at(fixture("diamond.gvn"), Algo::SedModified, "p2");
  EXPECT_EQ(render_sed(g2),
            "#0 ⟨c | ⊥⟩\n#1 ⟨e | ⊥⟩\n#2 ⟨x | 1⟩\n#3 ⟨y | 2⟩\n#4 ⟨z | 4⟩\n#5 ⟨d | +⟩ (#2, #3)\n");
}

TEST(Sed, TransferReusesCongruentNodes) {
  Sed g = straight_line("x := a + b; y := a + b; z := 1; w := 1;");
  EXPECT_EQ(g.node_of("x"), g.node_of("y"));
  EXPECT_EQ(g.node_of("z"), g.node_of("w"));
  EXPECT_NE(g.node_of("x"), g.node_of("z"));
}

TEST(Sed, TransferUsesPreAssignmentState) {
  Sed g = straight_line("y := x; x := x + 1;");
  auto x = g.node_of("x");
  ASSERT_TRUE(x);
  const AppType* app = g.node(*x).app();
  ASSERT_NE(app, nullptr);
  EXPECT_EQ(app->left, *g.node_of("y"));
}

TEST(Sed, OverwrittenNodeStaysWhenStillNeeded) {
  Sed g = straight_line("a := k + 1; x := a + b; a := 1;");
  // The old node of a is now anonymous but still the left child of x.
  const AppType* app = g.node(*g.node_of("x")).app();
  ASSERT_NE(app, nullptr);
  EXPECT_TRUE(g.node(app->left).anonymous());
  EXPECT_EQ(strings(terms_of(g, *g.node_of("x"), 2)), (Strings{"x", "k+a+b", "k+1+b"}));
  // An anonymous ⊥ represents nothing, so an application over it has no
  // terms besides its variables.
  Sed lost = straight_line("x := a + b; a := 1;");
  EXPECT_TRUE(lost.node(*lost.node_of("x")).is_bottom());
  // An overwritten ⊥ node nobody needs is dropped; an anonymous constant
  // still represents a term and stays.
  EXPECT_EQ(straight_line("q := r; q := 2;").size(), 2u);
  EXPECT_EQ(straight_line("q := 1; q := 2;").size(), 2u);
}

TEST(Sed, TransferRejectsUnknownVariables) {
  EXPECT_THROW(sed_transfer(sed_initial({"x"}), Statement{"x", T("y+1")}), Error);
}

TEST(Sed, TermsOfNode) {
  Sed g1 = sed_at(fixture("diamond.gvn"), Algo::SedOriginal, "p1");
  EXPECT_EQ(strings(terms_of(g1, *g1.node_of("c"), 1)), (Strings{"c", "x+y", "x+2", "1+y", "1+2"}));
  EXPECT_EQ(strings(terms_of(g1, *g1.node_of("c"), 0)), (Strings{"c"}));
  EXPECT_EQ(strings(terms_of(g1, *g1.node_of("d"), 3)), (Strings{"d"}));
}

TEST(Sed, LocateAndEquiv) {
  Sed g1 = sed_at(fixture("diamond.gvn"), Algo::SedOriginal, "p1");
  EXPECT_EQ(locate(g1, T("1+y")), g1.node_of("c"));
  EXPECT_FALSE(locate(g1, T("y+1")).has_value());
  EXPECT_TRUE(sed_equiv(g1, T("x+y"), T("1+2"), 1));
  EXPECT_FALSE(sed_equiv(g1, T("x+y"), T("1+2"), 0));
  EXPECT_FALSE(sed_equiv(g1, T("d"), T("c"), 3));
}

TEST(Sed, IntersectBranchStates) {
  Program p = fixture("diamond.gvn");
  Sed g1 = sed_at(p, Algo::SedOriginal, "p1");
  Sed g2 = sed_at(p, Algo::SedOriginal, "p2");
  SedBuilder out;
  Intersector in(g1, g2, out);
  auto x = in.intersect(*g1.node_of("x"), *g2.node_of("x"), 8);
  auto z = in.intersect(*g1.node_of("z"), *g2.node_of("z"), 8);
  auto sum = in.intersect(*g1.node_of("c"), *g2.node_of("d"), 8);
  auto none = in.intersect(*g1.node_of("d"), *g2.node_of("c"), 8);
  ASSERT_TRUE(x && z && sum);
  EXPECT_FALSE(none.has_value());
  out.add_var(*sum, "probe");
  Sed g = std::move(out).build();
  EXPECT_EQ(node_label(g.node(*g.node_of("x"))), "⟨x | 1⟩");
  EXPECT_EQ(node_label(g.node(*g.node_of("z"))), "⟨z | ⊥⟩");
  EXPECT_EQ(strings(drop_probe(terms_of(g, *g.node_of("probe"), 1))), (Strings{"x+y", "x+2", "1+y", "1+2"}));
}

TEST(Sed, IntersectBudgetCutsApplications) {
  Sed a = straight_line("x := p + q;");
  Sed b = straight_line("x := p + q;");
  SedBuilder out;
  Intersector in(a, b, out);
  auto r = in.intersect(*a.node_of("x"), *b.node_of("x"), 1);
  ASSERT_TRUE(r);
  EXPECT_EQ(in.stats().budget_exhaustions, 1u);
  Sed g = std::move(out).build();
  EXPECT_EQ(node_label(g.node(*g.node_of("x"))), "⟨x | ⊥⟩");
  EXPECT_LE(in.stats().max_depth, 1u);
}

TEST(Sed, IntersectDepthBoundedByCounter) {
  Sed a = straight_line("x := p + q; x := x + x; x := x + x; x := x + x;");
  for (std::size_t counter = 1; counter <= 6; ++counter) {
    SedBuilder out;
    Intersector in(a, a, out);
    in.intersect(*a.node_of("x"), *a.node_of("x"), counter);
    EXPECT_LE(in.stats().max_depth, counter);
  }
}

// Every SED the library builds keeps its invariants.
TEST(Sed, RandomStatesKeepInvariants) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    Sed g = random_sed(rng);
    std::set<std::string> seen;
    std::set<std::string> consts;
    std::set<std::tuple<Op, std::uint32_t, std::uint32_t>> apps;
    for (std::uint32_t k = 0; k < g.size(); ++k) {
      const SedNode& n = g.node(NodeId{k});
      EXPECT_FALSE(n.is_bottom() && n.anonymous());
      for (const auto& v : n.vars) EXPECT_TRUE(seen.insert(v).second) << v;
      if (const ConstType* c = n.constant()) EXPECT_TRUE(consts.insert(c->value.str()).second);
      if (const AppType* a = n.app()) {
        EXPECT_LT(a->left.value, k);
        EXPECT_LT(a->right.value, k);
        EXPECT_TRUE(apps.emplace(a->op, a->left.value, a->right.value).second);
      }
    }
    EXPECT_EQ(seen, testing::kSedVars);
  }
}

// Intersect with an ample budget represents exactly the common terms, and
// with a small budget a subset of them.
TEST(Sed, IntersectMatchesTermSetIntersection) {
  std::mt19937_64 rng(11);
  constexpr std::size_t kSize = 2;
  for (int i = 0; i < 200; ++i) {
    Sed g1 = random_sed(rng);
    Sed g2 = random_sed(rng);
    for (std::uint32_t a = 0; a < g1.size(); ++a) {
      for (std::uint32_t b = 0; b < g2.size(); ++b) {
        auto expected = sorted_intersection(terms_of(g1, NodeId{a}, kSize), terms_of(g2, NodeId{b}, kSize));
        for (std::size_t counter : {std::size_t{2}, std::size_t{32}}) {
          SedBuilder out;
          auto r = intersect(g1, NodeId{a}, g2, NodeId{b}, counter, out);
          std::vector<Term> got;
          if (r) {
            out.add_var(*r, "probe");
            Sed g = std::move(out).build();
            got = drop_probe(terms_of(g, *g.node_of("probe"), kSize));
          }
          if (counter == 32) {
            ASSERT_EQ(strings(got), strings(expected)) << render_sed(g1) << "---\n" << render_sed(g2);
          } else {
            ASSERT_EQ(sorted_intersection(got, expected).size(), got.size());
          }
        }
      }
    }
  }
}

TEST(Sed, PruneKeepsVariableNodesAndTheirChildren) {
  Sed g = straight_line("x := a + b; a := 1; b := 2; y := 7;");
  std::string before = render_sed(g);
  Sed pruned = prune_unnecessary(g);
  for (const auto& v : g.variables()) EXPECT_TRUE(pruned.node_of(v)) << v;
  EXPECT_TRUE(isomorphic(pruned, g)) << before << "---\n" << render_sed(pruned);
}

TEST(Sed, PruneDropsDetachedAnonymousNodes) {
  Program p = fixture("diamond.gvn");
  Sed modified = sed_at(p, Algo::SedModified, "p3");
  Sed pruned = prune_unnecessary(modified);
  EXPECT_EQ(pruned.size(), modified.size() - 1);
  EXPECT_TRUE(isomorphic(pruned, sed_at(p, Algo::SedOriginal, "p3")));
}

TEST(Sed, IsomorphismIgnoresNodeNumbering) {
  Sed a = straight_line("x := 1; y := 2; z := x + y;");
  Sed b = straight_line("y := 2; x := 1; z := x + y;");
  EXPECT_TRUE(isomorphic(a, b));
  EXPECT_EQ(render_sed(a), render_sed(b));
  EXPECT_FALSE(isomorphic(a, straight_line("x := 1; y := 2; z := y + x;")));
}

TEST(Sed, Dot) {
  Sed g1 = sed_at(fixture("diamond.gvn"), Algo::SedOriginal, "p1");
  std::string dot = to_dot(g1, "p1");
  EXPECT_EQ(dot.rfind("digraph p1 {", 0), 0u) << dot;
  EXPECT_NE(dot.find("label=\"L\""), std::string::npos);
  EXPECT_NE(dot.find("label=\"R\""), std::string::npos);
  EXPECT_EQ(dot.back(), '\n');
}

}  // namespace
}  // namespace gvn
