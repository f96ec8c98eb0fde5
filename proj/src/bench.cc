#include "osea/bench.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>
#include <utility>

#include <spdlog/spdlog.h>

#include "osea/osea.h"

namespace osea {
namespace {

using Clock = std::chrono::steady_clock;

// Gaps closer than this (in percent) count as a tie when tallying wins, so
// rounding noise in recomputed objectives does not decide a comparison.
constexpr double kGapTieTolerance = 1e-9;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::optional<double> MetricValue(const RunRecord& r, Metric metric) {
  if (metric == Metric::kTime) return r.wall_time;
  return r.gap_percent;
}

std::string OptionalNumber(const std::optional<double>& v) {
  return v ? FormatNumber(*v) : "NA";
}

// Quotes a CSV field only when it needs it.
std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct Reference {
  // User orientation, offset included.
  std::optional<double> z_bound;
};

Reference SolveReference(const MilpInstance& instance, const Budget& budget) {
  BnbOptions opts;
  opts.limit = budget;
  const BnbResult r = SolveMip(instance, opts);
  Reference ref;
  if (r.status == BnbStatus::kOptimal && r.incumbent) {
    ref.z_bound = ReportedObjective(instance, r.incumbent->objective);
  } else if (r.status != BnbStatus::kInfeasible && !r.root_lp_unbounded &&
             std::isfinite(r.root_lp_objective)) {
    ref.z_bound = ReportedObjective(instance, r.root_lp_objective);
  }
  return ref;
}

double ElapsedFor(TimeSource source, Clock::time_point start, int64_t lp_iterations) {
  if (source == TimeSource::kWork) return static_cast<double>(lp_iterations) * kWorkSecondsPerPivot;
  return SecondsSince(start);
}

RunRecord RunMethod(const BenchInstance& bi, const MethodSpec& method, const BenchOptions& options,
                    const Reference& ref) {
  RunRecord rec;
  rec.problem_id = bi.id;
  rec.method = method.label;
  std::optional<double> min_objective;
  const auto start = Clock::now();
  if (method.kind == MethodKind::kOsea) {
    OseaOptions opts;
    opts.n_max = options.n_max;
    opts.incumbent_budget = options.incumbent;
    opts.total_budget = options.total;
    try {
      const OseaResult r = RunOsea(bi.instance, opts);
      rec.wall_time = ElapsedFor(options.time_source, start, r.lp_iterations);
      rec.gamma = r.gamma;
      min_objective = r.objective;
      if (r.proven_infeasible) {
        rec.status = "Infeasible";
      } else {
        rec.status = r.objective ? "Feasible" : "NoSolutionFound";
      }
    } catch (const NotApplicableError&) {
      rec.wall_time = ElapsedFor(options.time_source, start, 0);
      rec.status = "NotApplicable";
    }
  } else {
    BnbOptions opts;
    opts.limit = options.total;
    const BnbResult r = SolveMip(bi.instance, opts);
    rec.wall_time = ElapsedFor(options.time_source, start, r.lp_iterations);
    rec.status = std::string(ToString(r.status));
    if (r.incumbent) min_objective = r.incumbent->objective;
  }
  if (min_objective) {
    rec.objective = ReportedObjective(bi.instance, *min_objective);
    if (ref.z_bound) rec.gap_percent = ComputeGap(*ref.z_bound, *rec.objective);
  }
  return rec;
}

double Mean(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
}

}  // namespace

double ComputeGap(double z_bound, double z) {
  if (!std::isfinite(z_bound) || !std::isfinite(z)) {
    throw InputError("gap needs finite objective values");
  }
  return std::abs(z_bound - z) / std::max(std::abs(z), kGapEpsilon) * 100.0;
}

std::string_view ToString(Metric metric) {
  return metric == Metric::kTime ? "time" : "gap";
}

std::optional<std::map<std::string, double>> ComputeRatios(std::span<const RunRecord> records,
                                                           Metric metric) {
  std::map<std::string, double> value;
  for (const RunRecord& r : records) {
    if (auto v = MetricValue(r, metric)) value[r.method] = std::max(*v, kGapEpsilon);
  }
  if (value.size() < 2) return std::nullopt;
  double best = kInfinity;
  for (const auto& [method, v] : value) best = std::min(best, v);
  for (auto& [method, v] : value) v = v == best ? 1.0 : v / best;
  return value;
}

std::vector<ProblemRatios> ComputeAllRatios(std::span<const RunRecord> records, Metric metric,
                                            std::vector<std::string>* warnings) {
  std::set<std::string> methods;
  std::map<std::string, std::vector<RunRecord>> by_problem;
  for (const RunRecord& r : records) {
    methods.insert(r.method);
    by_problem[r.problem_id].push_back(r);
  }
  std::vector<ProblemRatios> out;
  for (const auto& [id, group] : by_problem) {
    std::optional<std::map<std::string, double>> ratios = ComputeRatios(group, metric);
    if (!ratios || ratios->size() != methods.size()) {
      std::string msg = "problem " + id + " lacks a " + std::string(ToString(metric)) +
                        " value for some method; excluded from the profile";
      spdlog::warn("{}", msg);
      if (warnings) warnings->push_back(std::move(msg));
      continue;
    }
    out.push_back({id, std::move(*ratios)});
  }
  return out;
}

std::vector<double> DefaultTauGrid(double max_ratio) {
  constexpr int kPoints = 200;
  const double hi = std::max(4096.0, std::isfinite(max_ratio) ? max_ratio : 4096.0);
  std::vector<double> grid(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    grid[i] = std::pow(hi, static_cast<double>(i) / (kPoints - 1));
  }
  grid.front() = 1.0;
  grid.back() = hi;
  return grid;
}

std::vector<ProfileCurve> BuildProfiles(std::span<const ProblemRatios> ratios,
                                        std::span<const double> tau_grid, Metric metric) {
  if (ratios.empty()) throw InputError("performance profile needs at least one problem");
  std::map<std::string, std::vector<double>> per_method;
  for (const ProblemRatios& p : ratios) {
    for (const auto& [method, r] : p.ratio) per_method[method].push_back(r);
  }
  const double problems = static_cast<double>(ratios.size());
  std::vector<ProfileCurve> curves;
  for (auto& [method, values] : per_method) {
    std::sort(values.begin(), values.end());
    ProfileCurve curve{metric, method, {tau_grid.begin(), tau_grid.end()}, {}};
    curve.rho.reserve(tau_grid.size());
    for (double tau : tau_grid) {
      const auto within = std::upper_bound(values.begin(), values.end(), tau) - values.begin();
      curve.rho.push_back(static_cast<double>(within) / problems);
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

std::vector<MethodSpec> DefaultMethods() {
  return {{"OSEA", MethodKind::kOsea}, {"Standard", MethodKind::kStandard}};
}

PairedStat PairedTTest(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InputError("paired samples differ in length");
  PairedStat stat;
  stat.pairs = static_cast<int>(a.size());
  if (a.empty()) return stat;
  std::vector<double> d(a.size());
  for (size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  stat.mean_difference = Mean(d);
  if (d.size() < 2) return stat;
  double ss = 0.0;
  for (double x : d) ss += (x - stat.mean_difference) * (x - stat.mean_difference);
  const double sd = std::sqrt(ss / static_cast<double>(d.size() - 1));
  if (sd == 0.0) return stat;
  const double t = stat.mean_difference / (sd / std::sqrt(static_cast<double>(d.size())));
  stat.t_statistic = t;
  stat.p_value = std::erfc(std::abs(t) / std::sqrt(2.0));
  return stat;
}

BenchSummary Summarize(std::span<const RunRecord> records, std::span<const MethodSpec> methods) {
  BenchSummary summary;
  for (const MethodSpec& m : methods) {
    MethodSummary s;
    s.method = m.label;
    std::vector<double> times, gaps, gammas;
    for (const RunRecord& r : records) {
      if (r.method != m.label) continue;
      ++s.runs;
      if (r.objective) ++s.with_solution;
      times.push_back(r.wall_time);
      if (r.gap_percent) gaps.push_back(*r.gap_percent);
      if (r.gamma) gammas.push_back(*r.gamma);
    }
    s.mean_time = Mean(times);
    if (!gaps.empty()) s.mean_gap = Mean(gaps);
    if (!gammas.empty()) s.mean_gamma = Mean(gammas);
    summary.methods.push_back(std::move(s));
  }
  if (methods.size() < 2) return summary;

  PairedComparison pc;
  pc.first = methods[0].label;
  pc.second = methods[1].label;
  std::map<std::string, std::pair<const RunRecord*, const RunRecord*>> pairs;
  for (const RunRecord& r : records) {
    if (r.method == pc.first) pairs[r.problem_id].first = &r;
    if (r.method == pc.second) pairs[r.problem_id].second = &r;
  }
  std::vector<double> t1, t2, g1, g2;
  for (const auto& [id, p] : pairs) {
    if (!p.first || !p.second) continue;
    const RunRecord& a = *p.first;
    const RunRecord& b = *p.second;
    t1.push_back(a.wall_time);
    t2.push_back(b.wall_time);
    if (a.wall_time < b.wall_time) {
      ++pc.time_wins_first;
    } else if (b.wall_time < a.wall_time) {
      ++pc.time_wins_second;
    } else {
      ++pc.time_ties;
    }
    if (a.gap_percent && b.gap_percent) {
      g1.push_back(*a.gap_percent);
      g2.push_back(*b.gap_percent);
      if (*a.gap_percent < *b.gap_percent - kGapTieTolerance) {
        ++pc.gap_wins_first;
      } else if (*b.gap_percent < *a.gap_percent - kGapTieTolerance) {
        ++pc.gap_wins_second;
      } else {
        ++pc.gap_ties;
      }
    }
  }
  pc.time = PairedTTest(t1, t2);
  pc.gap = PairedTTest(g1, g2);
  summary.paired = std::move(pc);
  return summary;
}

BenchReport RunBenchmark(std::span<const BenchInstance> instances,
                         std::span<const MethodSpec> methods, const BenchOptions& options) {
  if (methods.empty()) throw InputError("benchmark needs at least one method");
  std::set<std::string> labels;
  for (const MethodSpec& m : methods) {
    if (!labels.insert(m.label).second) throw InputError("duplicate method label " + m.label);
  }
  BenchReport report;
  std::vector<std::vector<RunRecord>> slots(instances.size());
  std::mutex warn_mu;
  std::atomic<size_t> next{0};

  auto worker = [&] {
    for (size_t i = next++; i < instances.size(); i = next++) {
      const BenchInstance& bi = instances[i];
      Reference ref;
      try {
        ref = SolveReference(bi.instance, options.oracle);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(warn_mu);
        report.warnings.push_back(bi.id + ": reference solve failed: " + e.what());
      }
      for (const MethodSpec& m : methods) {
        try {
          slots[i].push_back(RunMethod(bi, m, options, ref));
        } catch (const std::exception& e) {
          RunRecord rec;
          rec.problem_id = bi.id;
          rec.method = m.label;
          rec.status = "Error";
          slots[i].push_back(std::move(rec));
          std::lock_guard<std::mutex> lock(warn_mu);
          report.warnings.push_back(bi.id + " [" + m.label + "]: " + e.what());
        }
        spdlog::info("bench: {} {} {}", bi.id, m.label, slots[i].back().status);
      }
    }
  };
  const int workers =
      std::clamp(options.workers, 1, std::max(1, static_cast<int>(instances.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  for (auto& slot : slots) {
    for (RunRecord& r : slot) report.records.push_back(std::move(r));
  }
  std::stable_sort(report.records.begin(), report.records.end(),
                   [](const RunRecord& a, const RunRecord& b) {
                     return std::tie(a.problem_id, a.method) < std::tie(b.problem_id, b.method);
                   });
  std::sort(report.warnings.begin(), report.warnings.end());
  report.summary = Summarize(report.records, methods);

  for (Metric metric : {Metric::kTime, Metric::kGap}) {
    std::vector<ProblemRatios> ratios = ComputeAllRatios(report.records, metric, &report.warnings);
    if (ratios.empty()) continue;
    double max_ratio = 1.0;
    for (const ProblemRatios& p : ratios) {
      for (const auto& [m, r] : p.ratio) max_ratio = std::max(max_ratio, r);
    }
    auto curves = BuildProfiles(ratios, DefaultTauGrid(max_ratio), metric);
    (metric == Metric::kTime ? report.time_profile : report.gap_profile) = std::move(curves);
  }
  return report;
}

std::string FormatNumber(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string RecordsToCsv(std::span<const RunRecord> records) {
  std::string out = "problem_id,method,status,wall_time_s,objective,gap_percent,gamma\n";
  for (const RunRecord& r : records) {
    out += CsvField(r.problem_id) + ',' + CsvField(r.method) + ',' + CsvField(r.status) + ',' +
           FormatNumber(r.wall_time) + ',' + OptionalNumber(r.objective) + ',' +
           OptionalNumber(r.gap_percent) + ',' + OptionalNumber(r.gamma) + '\n';
  }
  return out;
}

std::string ProfilesToCsv(std::span<const ProfileCurve> curves) {
  std::string out = "metric,method,tau,rho\n";
  for (const ProfileCurve& c : curves) {
    for (size_t i = 0; i < c.tau.size(); ++i) {
      out += std::string(ToString(c.metric)) + ',' + CsvField(c.method) + ',' +
             FormatNumber(c.tau[i]) + ',' + FormatNumber(c.rho[i]) + '\n';
    }
  }
  return out;
}

std::string SummaryToText(const BenchSummary& summary) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-12s %6s %8s %16s %16s %12s\n", "method", "runs", "solved",
                "mean_time_s", "mean_gap_pct", "mean_gamma");
  out << line;
  for (const MethodSummary& m : summary.methods) {
    std::snprintf(line, sizeof(line), "%-12s %6d %8d %16s %16s %12s\n", m.method.c_str(), m.runs,
                  m.with_solution, FormatNumber(m.mean_time).c_str(),
                  OptionalNumber(m.mean_gap).c_str(), OptionalNumber(m.mean_gamma).c_str());
    out << line;
  }
  if (summary.paired) {
    const PairedComparison& p = *summary.paired;
    out << "\n" << p.first << " vs " << p.second << "\n";
    auto stat_line = [&](const char* what, int w1, int w2, int ties, const PairedStat& s) {
      std::snprintf(line, sizeof(line),
                    "  %-5s wins %d/%d ties %d  pairs %d  mean_diff %s  t %s  p %s\n", what, w1,
                    w2, ties, s.pairs, FormatNumber(s.mean_difference).c_str(),
                    OptionalNumber(s.t_statistic).c_str(), OptionalNumber(s.p_value).c_str());
      out << line;
    };
    stat_line("time", p.time_wins_first, p.time_wins_second, p.time_ties, p.time);
    stat_line("gap", p.gap_wins_first, p.gap_wins_second, p.gap_ties, p.gap);
  }
  return out.str();
}

std::string SummaryToCsv(const BenchSummary& summary) {
  std::string out = "scope,name,value\n";
  auto row = [&](const std::string& scope, const char* name, const std::string& value) {
    out += CsvField(scope) + ',' + name + ',' + value + '\n';
  };
  for (const MethodSummary& m : summary.methods) {
    row(m.method, "runs", std::to_string(m.runs));
    row(m.method, "with_solution", std::to_string(m.with_solution));
    row(m.method, "mean_time_s", FormatNumber(m.mean_time));
    row(m.method, "mean_gap_percent", OptionalNumber(m.mean_gap));
    row(m.method, "mean_gamma", OptionalNumber(m.mean_gamma));
  }
  if (summary.paired) {
    const PairedComparison& p = *summary.paired;
    const std::string scope = p.first + " vs " + p.second;
    row(scope, "time_wins_first", std::to_string(p.time_wins_first));
    row(scope, "time_wins_second", std::to_string(p.time_wins_second));
    row(scope, "time_ties", std::to_string(p.time_ties));
    row(scope, "time_pairs", std::to_string(p.time.pairs));
    row(scope, "time_mean_difference", FormatNumber(p.time.mean_difference));
    row(scope, "time_t", OptionalNumber(p.time.t_statistic));
    row(scope, "time_p", OptionalNumber(p.time.p_value));
    row(scope, "gap_wins_first", std::to_string(p.gap_wins_first));
    row(scope, "gap_wins_second", std::to_string(p.gap_wins_second));
    row(scope, "gap_ties", std::to_string(p.gap_ties));
    row(scope, "gap_pairs", std::to_string(p.gap.pairs));
    row(scope, "gap_mean_difference", FormatNumber(p.gap.mean_difference));
    row(scope, "gap_t", OptionalNumber(p.gap.t_statistic));
    row(scope, "gap_p", OptionalNumber(p.gap.p_value));
  }
  return out;
}

}  // namespace osea
