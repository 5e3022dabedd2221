#include <set>

#include <gtest/gtest.h>

#include "gvn/analysis.hpp"
#include "gvn/dataflow.hpp"
#include "gvn/error.hpp"
#include "support/fixtures.hpp"

namespace gvn {
namespace {

using testing::fixture;
using testing::T;

// Variables assigned on some path: a may-analysis with union at joins.
struct Assigned {
  using State = std::set<std::string>;
  State initial() const { return {}; }
  State transfer(State s, const Statement& st, Warnings&) const {
    s.insert(st.target);
    return s;
  }
  State join(State a, const State& b) const {
    a.insert(b.begin(), b.end());
    return a;
  }
  bool equal(const State& a, const State& b) const { return a == b; }
};

static_assert(Analysis<Assigned>);
static_assert(Analysis<KildallAnalysis>);
static_assert(Analysis<SedAnalysis>);

using Names = std::set<std::string>;

TEST(Fixpoint, StraightLineVisitsOnce) {
  Cfg g = Cfg::build(fixture("overwrite.gvn"));
  auto r = run_fixpoint(g, Assigned{});
  EXPECT_EQ(r.iterations, 1u);
  EXPECT_EQ(r.at("p1"), (Names{"c", "x", "y"}));
  EXPECT_EQ(r.at("__entry"), Names{});
  EXPECT_EQ(r.at("__exit"), (Names{"a", "b", "c", "d", "x", "y"}));
}

TEST(Fixpoint, DiamondVisitsEachBlockOnce) {
  Cfg g = Cfg::build(fixture("diamond.gvn"));
  auto r = run_fixpoint(g, Assigned{});
  EXPECT_EQ(r.iterations, 4u);
  EXPECT_EQ(r.at("p1"), (Names{"c", "x", "y", "z"}));
  EXPECT_EQ(r.at("p3"), (Names{"c", "d", "x", "y", "z"}));
  EXPECT_THROW(r.at("nowhere"), UnknownPointError);
}

TEST(Fixpoint, LoopReachesFixpoint) {
  Cfg g = Cfg::build(parse_program("while (*) { a := b; b := c; c := d; } out:"));
  auto r = run_fixpoint(g, Assigned{});
  EXPECT_EQ(r.at("out"), (Names{"a", "b", "c"}));
  EXPECT_GT(r.iterations, 3u);
}

TEST(Fixpoint, DivergenceCapIsReported) {
  Cfg g = Cfg::build(parse_program("while (*) { a := b; b := c; c := d; } out:"));
  FixpointOptions opts;
  opts.max_visits = 2;
  try {
    run_fixpoint(g, Assigned{}, opts);
    FAIL() << "expected DivergenceError";
  } catch (const DivergenceError& e) {
    EXPECT_NE(std::string(e.what()).find("2"), std::string::npos) << e.what();
  }
}

TEST(Fixpoint, ReplayStopsBeforeStatement) {
  Program p = fixture("overwrite.gvn");
  Cfg g = Cfg::build(p);
  Warnings w;
  auto s = replay(Assigned{}, g, Names{}, Position{0, 2}, w);
  EXPECT_EQ(s, (Names{"x", "y"}));
}

TEST(Fixpoint, LoopFixtureUnderEveryAnalysis) {
  Program p = fixture("loop.gvn");
  for (Algo algo : kAllAlgos) {
    AnalysisResult r = AnalysisResult::run(p, algo);
    for (const char* point : {"head", "body_end", "after"}) {
      EXPECT_TRUE(r.equiv(point, T("x"), T("y"))) << algo_name(algo) << " " << point;
    }
    EXPECT_TRUE(r.equiv("head", T("x"), T("a+b"))) << algo_name(algo);
    EXPECT_FALSE(r.equiv("after", T("x"), T("a+b"))) << algo_name(algo);
    EXPECT_FALSE(r.equiv("body_end", T("x"), T("a+b"))) << algo_name(algo);
  }
}

TEST(Fixpoint, VisitOrderDoesNotChangeTheResult) {
  Program p = parse_program(
      "x := a + b; if (*) { while (*) { x := x + 1; y := a + b; } } else { y := a + b; } "
      "j: while (*) { if (*) { z := y + 1; } else { z := x; } }");
  for (Algo algo : kAllAlgos) {
    AnalysisResult base = AnalysisResult::run(p, algo);
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
      AnalysisOptions opts;
      opts.fixpoint.shuffle_seed = seed;
      AnalysisResult shuffled = AnalysisResult::run(p, algo, opts);
      for (const auto& [point, _] : base.cfg().points()) {
        EXPECT_EQ(base.relation(point, Relation::Closure), shuffled.relation(point, Relation::Closure))
            << algo_name(algo) << " seed " << seed << " at " << point;
      }
    }
  }
}

}  // namespace
}  // namespace gvn
