#include <set>
#include <unordered_set>

#include <gtest/gtest.h>

#include "gvn/error.hpp"
#include "gvn/universe.hpp"
#include "support/fixtures.hpp"

namespace gvn {
namespace {

using testing::T;

TermUniverse make(std::set<std::string> vars, std::set<Integer> consts, std::set<Op> ops, std::size_t bound) {
  TermUniverse u;
  u.variables = std::move(vars);
  u.constants = std::move(consts);
  u.operators = std::move(ops);
  u.bound = bound;
  return u;
}

std::vector<std::string> render(const std::vector<Term>& ts) {
  std::vector<std::string> out;
  for (const Term& t : ts) out.push_back(t.to_string());
  return out;
}

TEST(Universe, SmallestExample) {
  auto terms = enumerate_universe(make({"x"}, {Integer(1)}, {Op::Add}, 1));
  EXPECT_EQ(render(terms), (std::vector<std::string>{"x", "1", "x+x", "x+1", "1+x", "1+1"}));
}

TEST(Universe, BoundZeroHasOnlyAtoms) {
  auto terms = enumerate_universe(make({"x", "y"}, {Integer(1)}, {Op::Add, Op::Mul}, 0));
  EXPECT_EQ(render(terms), (std::vector<std::string>{"x", "y", "1"}));
}

TEST(Universe, CountsAtomsAndApplications) {
  auto u = make({"x", "y"}, {Integer(1), Integer(2)}, {Op::Add}, 1);
  EXPECT_EQ(universe_count(u), 20u);
  EXPECT_EQ(enumerate_universe(u).size(), 20u);
}

TEST(Universe, DuplicateFreeSortedAndDownwardClosed) {
  auto terms = enumerate_universe(make({"a", "b"}, {Integer(3)}, {Op::Sub, Op::Div}, 2));
  std::unordered_set<Term, TermHash> seen(terms.begin(), terms.end());
  EXPECT_EQ(seen.size(), terms.size());
  EXPECT_TRUE(std::is_sorted(terms.begin(), terms.end(), CanonicalLess{}));
  for (const Term& t : terms) {
    if (t.is_apply()) {
      EXPECT_TRUE(seen.contains(t.left()));
      EXPECT_TRUE(seen.contains(t.right()));
    }
  }
}

TEST(Universe, Deterministic) {
  auto u = make({"p", "q"}, {Integer(7)}, {Op::Add, Op::Mul}, 2);
  EXPECT_EQ(enumerate_universe(u), enumerate_universe(u));
}

TEST(Universe, CapacityError) {
  auto u = make({"a", "b", "c", "d"}, {Integer(1), Integer(2)}, {Op::Add, Op::Sub, Op::Mul, Op::Div}, 4);
  EXPECT_THROW(enumerate_universe(u), CapacityError);
  EXPECT_THROW(enumerate_universe(make({"x"}, {}, {Op::Add}, 3), 5), CapacityError);
}

TEST(Universe, ContainsEveryProgramTerm) {
  Program p = parse_program("x := (a+b)*c; y := a-(b/2); z := x;");
  auto u = Universe::build(TermUniverse::of(p));
  EXPECT_EQ(u->spec().bound, 2u);
  for (const Statement& s : p.statements()) EXPECT_TRUE(u->index_of(s.rhs).has_value()) << s.rhs.to_string();
  EXPECT_FALSE(u->index_of(T("a+(b+(c+a))")).has_value());
  EXPECT_THROW(u->require(T("q")), UnknownTermError);
}

TEST(Universe, EntriesPointAtChildren) {
  auto u = Universe::build(make({"x"}, {Integer(1)}, {Op::Add}, 2));
  for (Universe::Index i = 0; i < u->size(); ++i) {
    const auto& e = u->entry(i);
    if (e.kind != Term::Kind::Apply) continue;
    EXPECT_LT(e.left, i);
    EXPECT_LT(e.right, i);
    EXPECT_EQ(u->term(i), Term::apply(e.op, u->term(e.left), u->term(e.right)));
  }
}

}  // namespace
}  // namespace gvn
