#include "osea/mip.h"

#include <cmath>

#include <gtest/gtest.h>

#include "builders.h"
#include "oracles.h"
#include "osea/bench.h"
#include "osea/mps.h"

namespace osea {
namespace {

using testing::Dense;

TEST(BudgetTest, Parse) {
  EXPECT_EQ(Budget::Parse("1.5"), Budget::Seconds(1.5));
  EXPECT_EQ(Budget::Parse("200nodes"), Budget::Nodes(200));
  for (const char* bad : {"", "abc", "-1", "0", "5 nodes", "nodes", "0nodes", "1.5nodes"}) {
    EXPECT_THROW(Budget::Parse(bad), InputError) << bad;
  }
  EXPECT_TRUE(Budget::Seconds(2).has_time_limit());
  EXPECT_FALSE(Budget::Seconds(2).has_node_limit());
  EXPECT_TRUE(Budget::Nodes(2).has_node_limit());
  EXPECT_FALSE(Budget::Unlimited().has_time_limit());
}

TEST(MipTest, TraceInstanceOptimum) {
  const BnbResult r = SolveMip(testing::TraceInstance());
  ASSERT_EQ(r.status, BnbStatus::kOptimal);
  EXPECT_NEAR(r.incumbent->objective, 4.25, 1e-9);
  EXPECT_NEAR(r.incumbent->x[0], 1, 1e-9);
  EXPECT_NEAR(r.incumbent->x[3], 0.5, 1e-9);
  EXPECT_NEAR(r.bound, 4.25, 1e-6);
}

TEST(MipTest, MaximizationKnapsackFixture) {
  const MilpInstance inst = ReadMpsFile(testing::FixturePath("tiny_bp.mps"));
  const BnbResult r = SolveMip(inst);
  ASSERT_EQ(r.status, BnbStatus::kOptimal);
  // Only b + c (value 7) fills the capacity of 4 exactly.
  EXPECT_EQ(ReportedObjective(inst, r.incumbent->objective), 7);
}

TEST(MipTest, InfeasibleFixture) {
  const MilpInstance inst = ReadMpsFile(testing::FixturePath("infeasible_bp.mps"));
  const BnbResult r = SolveMip(inst);
  EXPECT_EQ(r.status, BnbStatus::kInfeasible);
  EXPECT_FALSE(r.incumbent.has_value());
}

TEST(MipTest, IntegerInfeasibleButLpFeasible) {
  // 2x = 1 with x integer.
  const MilpInstance inst =
      Dense({1}, {{{2}, RowConstraint::Equal(1)}}, {0}, {5}, {VarKind::kInteger});
  EXPECT_EQ(SolveMip(inst).status, BnbStatus::kInfeasible);
}

TEST(MipTest, UnboundedRelaxationReported) {
  const MilpInstance inst = Dense({-1, 0}, {{{1, -1}, RowConstraint::LessEqual(0.5)}}, {0, 0},
                                  {kInfinity, kInfinity},
                                  {VarKind::kInteger, VarKind::kContinuous});
  const BnbResult r = SolveMip(inst);
  EXPECT_TRUE(r.root_lp_unbounded);
  EXPECT_EQ(r.status, BnbStatus::kNoSolutionFound);
}

TEST(MipTest, NodeLimitOneIsRootOnly) {
  GeneratorSpec spec;
  spec.count = 10;
  spec.n_min = spec.n_max = 20;
  spec.classes = {ProblemClass::kPureInteger};
  for (const GeneratedInstance& g : GenerateInstances(3, spec)) {
    BnbOptions opts;
    opts.limit = Budget::Nodes(1);
    const BnbResult r = SolveMip(g.instance, opts);
    EXPECT_LE(r.nodes, 1);
    EXPECT_TRUE(r.status == BnbStatus::kOptimal || r.status == BnbStatus::kFeasible ||
                r.status == BnbStatus::kNoSolutionFound)
        << ToString(r.status);
    if (r.incumbent) {
      EXPECT_EQ(CheckFeasibility(g.instance, r.incumbent->x).status, SolutionStatus::kFeasible);
    }
  }
}

TEST(MipTest, IncumbentTraceImprovesMonotonically) {
  GeneratorSpec spec;
  spec.count = 10;
  spec.n_min = spec.n_max = 18;
  for (const GeneratedInstance& g : GenerateInstances(4, spec)) {
    const BnbResult r = SolveMip(g.instance);
    for (size_t k = 1; k < r.trace.size(); ++k) {
      EXPECT_LT(r.trace[k].incumbent, r.trace[k - 1].incumbent);
    }
    if (r.status == BnbStatus::kOptimal) EXPECT_LE(r.bound, r.incumbent->objective + 1e-6);
  }
}

TEST(MipOracleTest, PureIntegerMatchesBoxEnumeration) {
  GeneratorSpec spec;
  spec.count = 40;
  spec.n_min = 3;
  spec.n_max = 6;
  spec.m_min = 1;
  spec.m_max = 4;
  spec.integer_upper_max = 3;
  spec.classes = {ProblemClass::kPureInteger, ProblemClass::kBp};
  for (bool feasible : {true, false}) {
    spec.guaranteed_feasible = feasible;
    for (const GeneratedInstance& g : GenerateInstances(17, spec)) {
      const testing::OracleOptimum want = testing::EnumerateIntegerBox(g.instance.data());
      const BnbResult got = SolveMip(g.instance);
      if (!want.feasible) {
        EXPECT_EQ(got.status, BnbStatus::kInfeasible) << g.instance.name();
        continue;
      }
      ASSERT_EQ(got.status, BnbStatus::kOptimal) << g.instance.name();
      EXPECT_NEAR(got.incumbent->objective, want.objective, 1e-6) << g.instance.name();
    }
  }
}

TEST(MipOracleTest, MixedMatchesEnumerationPlusVertices) {
  GeneratorSpec spec;
  spec.count = 40;
  spec.n_min = 3;
  spec.n_max = 7;
  spec.m_min = 1;
  spec.m_max = 4;
  spec.integer_upper_max = 2;
  spec.continuous_lower_min = -2;
  spec.continuous_upper_max = 4;
  spec.classes = {ProblemClass::kMbp, ProblemClass::kMilp};
  for (const GeneratedInstance& g : GenerateInstances(29, spec)) {
    const testing::OracleOptimum want = testing::EnumerateMixed(g.instance.data());
    const BnbResult got = SolveMip(g.instance);
    ASSERT_TRUE(want.feasible) << g.instance.name();
    ASSERT_EQ(got.status, BnbStatus::kOptimal) << g.instance.name();
    EXPECT_NEAR(got.incumbent->objective, want.objective, 1e-6) << g.instance.name();
    EXPECT_TRUE(testing::OracleFeasible(g.instance.data(), got.incumbent->x));
  }
}

TEST(IncumbentSearchTest, FindsFeasiblePointOrProvesInfeasible) {
  const IncumbentSearch found = FindIncumbent(testing::TraceInstance(), Budget::Nodes(50));
  ASSERT_TRUE(found.incumbent.has_value());
  EXPECT_EQ(found.incumbent->status, SolutionStatus::kFeasible);

  const MilpInstance bad = ReadMpsFile(testing::FixturePath("infeasible_bp.mps"));
  const IncumbentSearch none = FindIncumbent(bad, Budget::Nodes(50));
  EXPECT_FALSE(none.incumbent.has_value());
  EXPECT_TRUE(none.proven_infeasible);
}

TEST(MipTest, DeterministicUnderNodeLimit) {
  GeneratorSpec spec;
  spec.count = 5;
  spec.n_min = spec.n_max = 25;
  for (const GeneratedInstance& g : GenerateInstances(12, spec)) {
    BnbOptions opts;
    opts.limit = Budget::Nodes(30);
    const BnbResult a = SolveMip(g.instance, opts);
    const BnbResult b = SolveMip(g.instance, opts);
    EXPECT_EQ(a.nodes, b.nodes);
    EXPECT_EQ(a.lp_iterations, b.lp_iterations);
    EXPECT_EQ(a.incumbent.has_value(), b.incumbent.has_value());
    if (a.incumbent) EXPECT_EQ(a.incumbent->x, b.incumbent->x);
  }
}

}  // namespace
}  // namespace osea
