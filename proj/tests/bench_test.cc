#include "osea/bench.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "builders.h"
#include "gap_table.h"
#include "oracles.h"
#include "osea/mip.h"
#include "osea/mps.h"

namespace osea {
namespace {

RunRecord Rec(std::string problem, std::string method, double time,
              std::optional<double> gap = std::nullopt) {
  RunRecord r;
  r.problem_id = std::move(problem);
  r.method = std::move(method);
  r.status = "Feasible";
  r.wall_time = time;
  if (gap) {
    r.objective = 1.0;
    r.gap_percent = gap;
  }
  return r;
}

TEST(GapTest, HandTable) {
  for (const testing::GapCase& c : testing::kGapTable) {
    const double got = ComputeGap(c.z_bound, c.z);
    EXPECT_NEAR(got, c.percent, 1e-12 * std::max(1.0, std::abs(c.percent)))
        << c.z_bound << " vs " << c.z;
  }
}

TEST(GapTest, RejectsNonFinite) {
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_THROW(ComputeGap(inf, 1), InputError);
  EXPECT_THROW(ComputeGap(1, std::nan("")), InputError);
}

TEST(RatioTest, TimesAndTies) {
  const std::vector<RunRecord> recs = {Rec("p", "OSEA", 10), Rec("p", "Standard", 30)};
  const auto r = ComputeRatios(recs, Metric::kTime);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->at("OSEA"), 1);
  EXPECT_EQ(r->at("Standard"), 3);

  const std::vector<RunRecord> tie = {Rec("p", "OSEA", 4), Rec("p", "Standard", 4)};
  EXPECT_EQ(ComputeRatios(tie, Metric::kTime)->at("Standard"), 1);
}

TEST(RatioTest, ZeroGapsUseFloor) {
  const std::vector<RunRecord> recs = {Rec("p", "OSEA", 1, 0.0), Rec("p", "Standard", 1, 2e-10)};
  const auto r = ComputeRatios(recs, Metric::kGap);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->at("OSEA"), 1);
  EXPECT_DOUBLE_EQ(r->at("Standard"), 2);
}

TEST(RatioTest, NeedsTwoMethods) {
  const std::vector<RunRecord> one = {Rec("p", "OSEA", 1)};
  EXPECT_FALSE(ComputeRatios(one, Metric::kTime).has_value());
  const std::vector<RunRecord> no_gap = {Rec("p", "OSEA", 1, 3.0), Rec("p", "Standard", 1)};
  EXPECT_FALSE(ComputeRatios(no_gap, Metric::kGap).has_value());
}

TEST(RatioTest, MissingMethodExcludedWithWarning) {
  const std::vector<RunRecord> recs = {Rec("a", "OSEA", 2), Rec("a", "Standard", 1),
                                       Rec("b", "OSEA", 5)};
  std::vector<std::string> warnings;
  const auto all = ComputeAllRatios(recs, Metric::kTime, &warnings);
  ASSERT_EQ(all.size(), 1u);
  EXPECT_EQ(all[0].problem_id, "a");
  EXPECT_EQ(all[0].ratio.at("OSEA"), 2);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find('b'), std::string::npos);
}

// Recomputed by hand, spreadsheet style.
TEST(RatioTest, FixtureRecordSet) {
  const std::vector<RunRecord> recs = {
      Rec("p1", "OSEA", 2.0, 1.0),  Rec("p1", "Standard", 8.0, 0.5),
      Rec("p2", "OSEA", 3.0, 0.0),  Rec("p2", "Standard", 1.5, 4.0),
      Rec("p3", "OSEA", 0.25, 2.0), Rec("p3", "Standard", 0.25, 2.0),
  };
  const auto time = ComputeAllRatios(recs, Metric::kTime);
  ASSERT_EQ(time.size(), 3u);
  EXPECT_EQ(time[0].ratio.at("OSEA"), 1);
  EXPECT_EQ(time[0].ratio.at("Standard"), 4);
  EXPECT_EQ(time[1].ratio.at("OSEA"), 2);
  EXPECT_EQ(time[1].ratio.at("Standard"), 1);
  EXPECT_EQ(time[2].ratio.at("OSEA"), 1);
  EXPECT_EQ(time[2].ratio.at("Standard"), 1);

  const auto gap = ComputeAllRatios(recs, Metric::kGap);
  ASSERT_EQ(gap.size(), 3u);
  EXPECT_EQ(gap[0].ratio.at("OSEA"), 2);
  EXPECT_EQ(gap[0].ratio.at("Standard"), 1);
  EXPECT_EQ(gap[1].ratio.at("OSEA"), 1);
  EXPECT_DOUBLE_EQ(gap[1].ratio.at("Standard"), 4.0 / kGapEpsilon);
}

TEST(TauGridTest, Shape) {
  const std::vector<double> g = DefaultTauGrid();
  ASSERT_EQ(g.size(), 200u);
  EXPECT_EQ(g.front(), 1);
  EXPECT_EQ(g.back(), 4096);
  EXPECT_TRUE(std::is_sorted(g.begin(), g.end()));
  EXPECT_EQ(DefaultTauGrid(1e6).back(), 1e6);
}

TEST(ProfileTest, SingleProblemWin) {
  const std::vector<ProblemRatios> ratios = {{"p", {{"OSEA", 1.0}, {"Standard", 2.5}}}};
  const std::vector<double> grid = {1, 2, 3};
  const auto curves = BuildProfiles(ratios, grid, Metric::kTime);
  ASSERT_EQ(curves.size(), 2u);
  EXPECT_EQ(curves[0].method, "OSEA");
  EXPECT_EQ(curves[0].rho, (std::vector<double>{1, 1, 1}));
  EXPECT_EQ(curves[1].rho, (std::vector<double>{0, 0, 1}));
}

TEST(ProfileTest, EmptyInputThrows) {
  const std::vector<double> grid = {1};
  EXPECT_THROW(BuildProfiles({}, grid, Metric::kGap), InputError);
}

TEST(ProfileTest, WithinFactorSixPointOne) {
  const std::vector<RunRecord> recs = {
      Rec("a", "OSEA", 1.0),  Rec("a", "Standard", 1.0),  Rec("b", "OSEA", 6.1),
      Rec("b", "Standard", 1.0), Rec("c", "OSEA", 2.0), Rec("c", "Standard", 4.0),
      Rec("d", "OSEA", 3.0),  Rec("d", "Standard", 0.5),
  };
  const auto ratios = ComputeAllRatios(recs, Metric::kTime);
  const std::vector<double> grid = {1, 2, 6, 6.1, 10};
  const auto curves = BuildProfiles(ratios, grid, Metric::kTime);
  const ProfileCurve& osea = curves[0];
  ASSERT_EQ(osea.method, "OSEA");
  EXPECT_EQ(osea.rho[0], 0.5);
  EXPECT_EQ(osea.rho[2], 0.75);
  EXPECT_EQ(osea.rho[3], 1.0);
}

TEST(ProfileTest, TauOneGivesWinFractionsWithTiesForBoth) {
  const std::vector<ProblemRatios> ratios = {
      {"a", {{"OSEA", 1.0}, {"Standard", 1.0}}},
      {"b", {{"OSEA", 1.0}, {"Standard", 3.0}}},
      {"c", {{"OSEA", 2.0}, {"Standard", 1.0}}},
      {"d", {{"OSEA", 1.0}, {"Standard", 1.5}}},
  };
  const std::vector<double> grid = {1};
  const auto curves = BuildProfiles(ratios, grid, Metric::kGap);
  EXPECT_EQ(curves[0].rho[0], 0.75);
  EXPECT_EQ(curves[1].rho[0], 0.5);
}

TEST(ProfileTest, RandomSetsMatchCountingOracle) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const int problems = 1 + static_cast<int>(rng() % 30);
    std::vector<RunRecord> recs;
    for (int p = 0; p < problems; ++p) {
      const std::string id = "p" + std::to_string(p);
      recs.push_back(Rec(id, "OSEA", 0.01 * static_cast<double>(1 + rng() % 5000)));
      recs.push_back(Rec(id, "Standard", 0.01 * static_cast<double>(1 + rng() % 5000)));
    }
    const auto ratios = ComputeAllRatios(recs, Metric::kTime);
    double max_ratio = 1;
    for (const auto& pr : ratios) {
      for (const auto& [m, v] : pr.ratio) max_ratio = std::max(max_ratio, v);
    }
    const std::vector<double> grid = DefaultTauGrid(max_ratio);
    for (const ProfileCurve& curve : BuildProfiles(ratios, grid, Metric::kTime)) {
      std::vector<double> mine;
      for (const auto& pr : ratios) mine.push_back(pr.ratio.at(curve.method));
      EXPECT_EQ(curve.rho, testing::CountingProfile(mine, grid));
      EXPECT_TRUE(std::is_sorted(curve.rho.begin(), curve.rho.end()));
      EXPECT_EQ(curve.rho.back(), 1.0);
      EXPECT_GE(curve.rho.front(), 0.0);
    }
  }
}

GeneratorSpec SmallSpec() {
  GeneratorSpec spec;
  spec.count = 12;
  spec.n_min = 6;
  spec.n_max = 14;
  spec.m_min = 2;
  spec.m_max = 8;
  return spec;
}

TEST(GeneratorTest, Deterministic) {
  const auto a = GenerateInstances(42, SmallSpec());
  const auto b = GenerateInstances(42, SmallSpec());
  const auto c = GenerateInstances(43, SmallSpec());
  ASSERT_EQ(a.size(), 12u);
  int differ = 0;
  for (size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].instance, b[k].instance);
    EXPECT_EQ(a[k].certificate, b[k].certificate);
    differ += !(a[k].instance == c[k].instance);
  }
  EXPECT_GT(differ, 0);
}

TEST(GeneratorTest, CertificatesAreFeasible) {
  GeneratorSpec spec = SmallSpec();
  spec.count = 60;
  spec.continuous_lower_min = -3;
  for (const GeneratedInstance& g : GenerateInstances(7, spec)) {
    ASSERT_TRUE(g.certificate.has_value());
    EXPECT_EQ(CheckFeasibility(g.instance, *g.certificate).status, SolutionStatus::kFeasible)
        << g.instance.name();
    EXPECT_TRUE(testing::OracleFeasible(g.instance.data(), *g.certificate));
  }
}

TEST(GeneratorTest, CyclesThroughClasses) {
  GeneratorSpec spec = SmallSpec();
  spec.count = 8;
  const auto gen = GenerateInstances(1, spec);
  for (size_t k = 0; k < gen.size(); ++k) {
    EXPECT_EQ(Classify(gen[k].instance), spec.classes[k % spec.classes.size()]) << k;
  }
}

TEST(GeneratorTest, NotGuaranteedHasNoCertificate) {
  GeneratorSpec spec = SmallSpec();
  spec.guaranteed_feasible = false;
  for (const GeneratedInstance& g : GenerateInstances(2, spec)) {
    EXPECT_FALSE(g.certificate.has_value());
  }
}

TEST(GeneratorTest, BinaryTwelveMatchesEnumeration) {
  GeneratorSpec spec;
  spec.count = 6;
  spec.n_min = spec.n_max = 12;
  spec.classes = {ProblemClass::kBp};
  for (const GeneratedInstance& g : GenerateInstances(12, spec)) {
    const testing::OracleOptimum want = testing::EnumerateIntegerBox(g.instance.data());
    const BnbResult got = SolveMip(g.instance);
    ASSERT_TRUE(want.feasible);
    ASSERT_EQ(got.status, BnbStatus::kOptimal);
    EXPECT_NEAR(got.incumbent->objective, want.objective, 1e-9);
  }
}

TEST(GeneratorSpecTest, ParsesKeys) {
  const GeneratorSpec s = ParseGeneratorSpec(
      "count=20,n=15..25,m=3..4,int=0.6,density=0.3,cost=-2..9,coef=4,ub=2,cub=7,clb=-1,"
      "feasible=0,classes=BP+MILP");
  EXPECT_EQ(s.count, 20);
  EXPECT_EQ(s.n_min, 15);
  EXPECT_EQ(s.n_max, 25);
  EXPECT_EQ(s.m_max, 4);
  EXPECT_EQ(s.integer_fraction, 0.6);
  EXPECT_EQ(s.cost_min, -2);
  EXPECT_EQ(s.coef_max, 4);
  EXPECT_EQ(s.continuous_lower_min, -1);
  EXPECT_FALSE(s.guaranteed_feasible);
  EXPECT_EQ(s.classes, (std::vector<ProblemClass>{ProblemClass::kBp, ProblemClass::kMilp}));
  EXPECT_EQ(ParseGeneratorSpec("").count, GeneratorSpec{}.count);
  EXPECT_EQ(ParseGeneratorSpec("n=8").n_max, 8);
}

TEST(GeneratorSpecTest, Errors) {
  for (const char* bad : {"bogus=1", "count", "n=5..2", "n=abc", "density=0", "int=1.5",
                          "classes=XYZ", "clb=2", "count=-1", "coef=0"}) {
    EXPECT_THROW(ParseGeneratorSpec(bad), InputError) << bad;
  }
}

TEST(PairedTTestTest, KnownValues) {
  const std::vector<double> a = {3, 5, 7, 9};
  const std::vector<double> b = {1, 2, 3, 4};
  // d = 2,3,4,5: mean 3.5, sd sqrt(5/3), t = 3.5 / (sd / 2).
  const PairedStat s = PairedTTest(a, b);
  EXPECT_EQ(s.pairs, 4);
  EXPECT_DOUBLE_EQ(s.mean_difference, 3.5);
  ASSERT_TRUE(s.t_statistic.has_value());
  EXPECT_NEAR(*s.t_statistic, 7.0 / std::sqrt(5.0 / 3.0), 1e-12);
  EXPECT_NEAR(*s.p_value, std::erfc(*s.t_statistic / std::sqrt(2.0)), 1e-15);

  const std::vector<double> c = {2, 3, 4, 5};
  EXPECT_FALSE(PairedTTest(c, c).t_statistic.has_value());
  EXPECT_THROW(PairedTTest(a, std::vector<double>{1}), InputError);
}

TEST(CsvTest, RecordsFormat) {
  RunRecord r = Rec("x,y", "OSEA", 0.5, 12.5);
  r.gamma = 0.25;
  const std::vector<RunRecord> recs = {r, Rec("z", "Standard", 1)};
  const std::string csv = RecordsToCsv(recs);
  EXPECT_EQ(csv,
            "problem_id,method,status,wall_time_s,objective,gap_percent,gamma\n"
            "\"x,y\",OSEA,Feasible,0.5,1,12.5,0.25\n"
            "z,Standard,Feasible,1,NA,NA,NA\n");
}

TEST(CsvTest, ProfilesFormat) {
  const std::vector<ProfileCurve> curves = {{Metric::kGap, "OSEA", {1, 2}, {0.5, 1}}};
  EXPECT_EQ(ProfilesToCsv(curves), "metric,method,tau,rho\ngap,OSEA,1,0.5\ngap,OSEA,2,1\n");
}

TEST(CsvTest, SummaryHeader) {
  const std::vector<RunRecord> recs = {Rec("a", "OSEA", 1, 0.0), Rec("a", "Standard", 2, 0.0)};
  const BenchSummary s = Summarize(recs, DefaultMethods());
  ASSERT_EQ(s.methods.size(), 2u);
  EXPECT_EQ(s.methods[1].mean_time, 2);
  ASSERT_TRUE(s.paired.has_value());
  EXPECT_EQ(s.paired->time_wins_first, 1);
  EXPECT_EQ(s.paired->gap_ties, 1);
  EXPECT_EQ(SummaryToCsv(s).rfind("scope,name,value\n", 0), 0u);
  EXPECT_FALSE(SummaryToText(s).empty());
}

std::vector<BenchInstance> FixtureBatch() {
  std::vector<BenchInstance> out;
  for (const char* name : {"trace4.mps", "tiny_bp.mps", "milp_mixed.mps",
                           "equality_int.mps", "infeasible_bp.mps"}) {
    out.push_back({name, ReadMpsFile(testing::FixturePath(name))});
  }
  return out;
}

BenchOptions NodeOptions() {
  BenchOptions opts;
  opts.total = Budget::Nodes(2000);
  opts.incumbent = Budget::Nodes(50);
  opts.oracle = Budget::Nodes(100000);
  opts.time_source = TimeSource::kWork;
  return opts;
}

TEST(RunBenchmarkTest, OneRecordPerPair) {
  const auto report = RunBenchmark(FixtureBatch(), DefaultMethods(), NodeOptions());
  ASSERT_EQ(report.records.size(), 10u);
  const std::string csv = RecordsToCsv(report.records);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 11);
  for (const RunRecord& r : report.records) {
    EXPECT_GE(r.wall_time, 0);
    if (r.gap_percent) EXPECT_TRUE(r.objective.has_value());
    if (r.method == "OSEA" && r.objective) {
      ASSERT_TRUE(r.gamma.has_value());
      EXPECT_GE(*r.gamma, 0);
      EXPECT_LE(*r.gamma, 1);
    }
    if (r.problem_id == "infeasible_bp.mps") EXPECT_EQ(r.status, "Infeasible");
  }
}

TEST(RunBenchmarkTest, SelfComparisonGivesUnitRatios) {
  const std::vector<MethodSpec> twins = {{"A", MethodKind::kStandard},
                                         {"B", MethodKind::kStandard}};
  const auto report = RunBenchmark(FixtureBatch(), twins, NodeOptions());
  for (Metric metric : {Metric::kTime, Metric::kGap}) {
    for (const ProblemRatios& pr : ComputeAllRatios(report.records, metric)) {
      EXPECT_EQ(pr.ratio.at("A"), 1);
      EXPECT_EQ(pr.ratio.at("B"), 1);
    }
  }
  ASSERT_EQ(report.time_profile.size(), 2u);
  EXPECT_EQ(report.time_profile[0].rho, report.time_profile[1].rho);
}

TEST(RunBenchmarkTest, ReproducibleAcrossWorkerCounts) {
  GeneratorSpec spec = SmallSpec();
  spec.count = 8;
  std::vector<BenchInstance> batch;
  for (GeneratedInstance& g : GenerateInstances(5, spec)) {
    batch.push_back({g.instance.name(), std::move(g.instance)});
  }
  BenchOptions one = NodeOptions();
  BenchOptions four = NodeOptions();
  four.workers = 4;
  EXPECT_EQ(RecordsToCsv(RunBenchmark(batch, DefaultMethods(), one).records),
            RecordsToCsv(RunBenchmark(batch, DefaultMethods(), four).records));
}

}  // namespace
}  // namespace osea
