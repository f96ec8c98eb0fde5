#include "osea/report.h"

#include <string>
#include <utility>

namespace osea {
namespace {

using nlohmann::json;

constexpr const char* kSchema = "osea-report/1";

template <typename Enum, size_t N>
Enum FromName(const std::string& name, const Enum (&values)[N]) {
  for (Enum v : values) {
    if (ToString(v) == name) return v;
  }
  throw InputError("unknown enum value '" + name + "' in report");
}

constexpr SolutionStatus kSolutionStatuses[] = {
    SolutionStatus::kFeasible, SolutionStatus::kIntegerInfeasible,
    SolutionStatus::kConstraintInfeasible, SolutionStatus::kUnknown};
constexpr StopReason kStopReasons[] = {
    StopReason::kCoefficientStall, StopReason::kIterationCap, StopReason::kTimeBudget,
    StopReason::kLpInfeasible,     StopReason::kLpUnbounded,  StopReason::kLpFailure,
    StopReason::kNumericalFailure};
constexpr Provenance kProvenances[] = {Provenance::kSeededIncumbent, Provenance::kScalingBest,
                                       Provenance::kScalingWorst, Provenance::kScalingMedian};
constexpr SolutionSource kSources[] = {SolutionSource::kNone, SolutionSource::kReducedSolve,
                                       SolutionSource::kSeededIncumbent,
                                       SolutionSource::kFullSolve};
constexpr BnbStatus kBnbStatuses[] = {BnbStatus::kOptimal, BnbStatus::kFeasible,
                                      BnbStatus::kInfeasible, BnbStatus::kNoSolutionFound};

json SolutionJson(const Solution& s) {
  return {{"status", std::string(ToString(s.status))}, {"objective", s.objective}, {"x", s.x}};
}

Solution SolutionFrom(const json& j) {
  Solution s;
  s.status = FromName(j.at("status").get<std::string>(), kSolutionStatuses);
  s.objective = j.at("objective").get<double>();
  s.x = j.at("x").get<std::vector<double>>();
  return s;
}

template <typename T>
json Optional(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

json OseaResultToJson(const OseaResult& result, const MilpInstance& instance,
                      bool include_timings) {
  json history = json::array();
  for (size_t n = 0; n < result.scaling.history.size(); ++n) {
    const ScalingIterate& it = result.scaling.history[n];
    history.push_back({{"iteration", n},
                       {"scaled_costs", it.scaled_costs},
                       {"x", it.x},
                       {"scaled_objective", it.scaled_objective},
                       {"original_objective", it.original_objective}});
  }
  json ensemble = json::array();
  for (const EnsembleMember& m : result.ensemble) {
    ensemble.push_back({{"provenance", std::string(ToString(m.provenance))},
                        {"iteration", m.iteration},
                        {"solution", SolutionJson(m.solution)}});
  }
  json report = {
      {"schema", kSchema},
      {"instance", instance.name()},
      {"objective", result.objective ? json(ReportedObjective(instance, *result.objective))
                                     : json(nullptr)},
      {"objective_min", Optional(result.objective)},
      {"source", std::string(ToString(result.source))},
      {"gamma", result.gamma},
      {"integer_count", result.integer_count},
      {"fixed_count", result.fix_set.size()},
      {"fix_set", result.fix_set},
      {"iterations_run", result.iterations_run},
      {"stop_reason", std::string(ToString(result.stop_reason))},
      {"diagnostic", result.diagnostic},
      {"reduced_status", result.reduced_status ? json(std::string(ToString(*result.reduced_status)))
                                               : json(nullptr)},
      {"incumbent_objective", Optional(result.incumbent_objective)},
      {"flags",
       {{"fallback_full_solve", result.fallback_full_solve},
        {"proven_infeasible", result.proven_infeasible},
        {"m_clamped", result.m_clamped},
        {"all_integer_costs_zero", result.all_integer_costs_zero}}},
      {"scaling",
       {{"m", result.scaling.m},
        {"integer_vars", result.scaling.integer_vars},
        {"c_bar", result.scaling.c_bar},
        {"history", std::move(history)}}},
      {"ensemble", std::move(ensemble)},
      {"solution", result.solution ? SolutionJson(*result.solution) : json(nullptr)},
      {"nodes", result.nodes},
      {"lp_iterations", result.lp_iterations},
  };
  if (include_timings) {
    report["timings"] = {{"incumbent", result.timings.incumbent},
                         {"scaling", result.timings.scaling},
                         {"aggregation", result.timings.aggregation},
                         {"reduced_solve", result.timings.reduced_solve},
                         {"total", result.timings.total}};
  }
  return report;
}

OseaResult OseaResultFromJson(const json& report) {
  try {
    if (report.at("schema").get<std::string>() != kSchema) {
      throw InputError("unsupported report schema");
    }
    OseaResult r;
    if (!report.at("objective_min").is_null()) r.objective = report["objective_min"].get<double>();
    r.source = FromName(report.at("source").get<std::string>(), kSources);
    r.gamma = report.at("gamma").get<double>();
    r.integer_count = report.at("integer_count").get<int>();
    r.fix_set = report.at("fix_set").get<std::vector<int>>();
    r.iterations_run = report.at("iterations_run").get<int>();
    r.stop_reason = FromName(report.at("stop_reason").get<std::string>(), kStopReasons);
    r.diagnostic = report.at("diagnostic").get<std::string>();
    if (!report.at("reduced_status").is_null()) {
      r.reduced_status = FromName(report["reduced_status"].get<std::string>(), kBnbStatuses);
    }
    if (!report.at("incumbent_objective").is_null()) {
      r.incumbent_objective = report["incumbent_objective"].get<double>();
    }
    const json& flags = report.at("flags");
    r.fallback_full_solve = flags.at("fallback_full_solve").get<bool>();
    r.proven_infeasible = flags.at("proven_infeasible").get<bool>();
    r.m_clamped = flags.at("m_clamped").get<bool>();
    r.all_integer_costs_zero = flags.at("all_integer_costs_zero").get<bool>();
    const json& scaling = report.at("scaling");
    r.scaling.m = scaling.at("m").get<double>();
    r.scaling.m_clamped = r.m_clamped;
    r.scaling.integer_vars = scaling.at("integer_vars").get<std::vector<int>>();
    r.scaling.c_bar = scaling.at("c_bar").get<std::vector<double>>();
    for (const json& h : scaling.at("history")) {
      ScalingIterate it;
      it.scaled_costs = h.at("scaled_costs").get<std::vector<double>>();
      it.x = h.at("x").get<std::vector<double>>();
      it.scaled_objective = h.at("scaled_objective").get<double>();
      it.original_objective = h.at("original_objective").get<double>();
      r.scaling.history.push_back(std::move(it));
    }
    r.scaling.iteration = static_cast<int>(r.scaling.history.size());
    for (const json& m : report.at("ensemble")) {
      r.ensemble.push_back({SolutionFrom(m.at("solution")),
                            FromName(m.at("provenance").get<std::string>(), kProvenances),
                            m.at("iteration").get<int>()});
    }
    if (!report.at("solution").is_null()) r.solution = SolutionFrom(report["solution"]);
    r.nodes = report.at("nodes").get<int64_t>();
    r.lp_iterations = report.at("lp_iterations").get<int64_t>();
    if (report.contains("timings")) {
      const json& t = report["timings"];
      r.timings = {t.at("incumbent").get<double>(), t.at("scaling").get<double>(),
                   t.at("aggregation").get<double>(), t.at("reduced_solve").get<double>(),
                   t.at("total").get<double>()};
    }
    return r;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
}

}  // namespace osea
