// Evaluation harness: gaps, performance ratios and profiles, random
// instance generation, and paired OSEA-versus-plain benchmark runs.

#ifndef OSEA_BENCH_H_
#define OSEA_BENCH_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "osea/mip.h"
#include "osea/model.h"

namespace osea {

// Denominator guard for gaps and ratios whose reference value is zero.
inline constexpr double kGapEpsilon = 1e-10;

// |z_bound - z| / max(|z|, kGapEpsilon) * 100. Throws InputError on
// non-finite input.
double ComputeGap(double z_bound, double z);

struct RunRecord {
  std::string problem_id;
  std::string method;
  std::string status;
  double wall_time = 0.0;
  std::optional<double> objective;
  std::optional<double> gap_percent;
  std::optional<double> gamma;
};

enum class Metric { kTime, kGap };

std::string_view ToString(Metric metric);

struct ProblemRatios {
  std::string problem_id;
  std::map<std::string, double> ratio;
};

// Ratio of each method's value to the best one on a single problem. Values
// are floored at kGapEpsilon so zero times or gaps stay finite. Returns
// nullopt when fewer than two methods carry a value.
std::optional<std::map<std::string, double>> ComputeRatios(std::span<const RunRecord> records,
                                                           Metric metric);

// Groups records by problem and computes ratios for every problem where all
// methods seen in `records` carry a value; other problems are skipped with
// a warning.
std::vector<ProblemRatios> ComputeAllRatios(std::span<const RunRecord> records, Metric metric,
                                            std::vector<std::string>* warnings = nullptr);

struct ProfileCurve {
  Metric metric = Metric::kTime;
  std::string method;
  std::vector<double> tau;
  std::vector<double> rho;
};

// 200 geometric points from 1 to max(4096, max_ratio).
std::vector<double> DefaultTauGrid(double max_ratio = 1.0);

// rho(tau) = fraction of problems whose ratio is <= tau, per method.
std::vector<ProfileCurve> BuildProfiles(std::span<const ProblemRatios> ratios,
                                        std::span<const double> tau_grid, Metric metric);

struct GeneratorSpec {
  int count = 10;
  int n_min = 10;
  int n_max = 20;
  int m_min = 5;
  int m_max = 10;
  // Share of integer columns in mixed classes.
  double integer_fraction = 0.5;
  double density = 0.4;
  int cost_min = -5;
  int cost_max = 20;
  int coef_max = 9;
  int integer_upper_max = 5;
  int continuous_upper_max = 10;
  // Negative values give continuous columns a lower bound below zero.
  int continuous_lower_min = 0;
  bool guaranteed_feasible = true;
  // Instance k gets classes[k % classes.size()].
  std::vector<ProblemClass> classes = {ProblemClass::kBp, ProblemClass::kMbp,
                                       ProblemClass::kPureInteger, ProblemClass::kMilp};
};

// "count=20,n=15..25,m=5..10,int=0.6,density=0.3,cost=-5..20,coef=9,
//  ub=5,cub=10,clb=0,feasible=1,classes=BP+MILP". Unlisted keys keep their
// defaults. Throws InputError.
GeneratorSpec ParseGeneratorSpec(std::string_view text);

struct GeneratedInstance {
  MilpInstance instance;
  // Integer point satisfying every row, present when guaranteed feasible.
  std::optional<std::vector<double>> certificate;
};

// Deterministic in (seed, spec). Coefficients, costs and right-hand sides
// are integers, so objective values are exact.
std::vector<GeneratedInstance> GenerateInstances(uint64_t seed, const GeneratorSpec& spec);

enum class MethodKind { kOsea, kStandard };

struct MethodSpec {
  std::string label;
  MethodKind kind = MethodKind::kOsea;
};

std::vector<MethodSpec> DefaultMethods();

enum class TimeSource {
  kWallClock,
  // LP pivots times kWorkSecondsPerPivot; reproducible across runs.
  kWork,
};

inline constexpr double kWorkSecondsPerPivot = 1e-6;

struct BenchOptions {
  Budget total = Budget::Seconds(60.0);
  Budget incumbent = Budget::Seconds(1.0);
  // Reference solve that provides z_bound.
  Budget oracle = Budget::Seconds(600.0);
  int n_max = 50;
  int workers = 1;
  TimeSource time_source = TimeSource::kWallClock;
};

struct BenchInstance {
  std::string id;
  MilpInstance instance;
};

struct MethodSummary {
  std::string method;
  int runs = 0;
  int with_solution = 0;
  double mean_time = 0.0;
  std::optional<double> mean_gap;
  std::optional<double> mean_gamma;
};

struct PairedStat {
  int pairs = 0;
  double mean_difference = 0.0;
  std::optional<double> t_statistic;
  // Two-sided, normal approximation.
  std::optional<double> p_value;
};

struct PairedComparison {
  std::string first;
  std::string second;
  int time_wins_first = 0;
  int time_wins_second = 0;
  int time_ties = 0;
  int gap_wins_first = 0;
  int gap_wins_second = 0;
  int gap_ties = 0;
  PairedStat time;
  PairedStat gap;
};

struct BenchSummary {
  std::vector<MethodSummary> methods;
  std::optional<PairedComparison> paired;
};

struct BenchReport {
  std::vector<RunRecord> records;
  BenchSummary summary;
  std::vector<ProfileCurve> time_profile;
  std::vector<ProfileCurve> gap_profile;
  std::vector<std::string> warnings;
};

// Mean difference, t statistic and two-sided normal p-value of a - b.
PairedStat PairedTTest(std::span<const double> a, std::span<const double> b);

BenchSummary Summarize(std::span<const RunRecord> records, std::span<const MethodSpec> methods);

// One record per (instance, method), sorted by problem id then method.
// Failures of individual instances become record statuses.
BenchReport RunBenchmark(std::span<const BenchInstance> instances,
                         std::span<const MethodSpec> methods, const BenchOptions& options);

std::string RecordsToCsv(std::span<const RunRecord> records);
std::string ProfilesToCsv(std::span<const ProfileCurve> curves);
std::string SummaryToText(const BenchSummary& summary);
std::string SummaryToCsv(const BenchSummary& summary);

// %.10g
std::string FormatNumber(double v);

}  // namespace osea

#endif  // OSEA_BENCH_H_
