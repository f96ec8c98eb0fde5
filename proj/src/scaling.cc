#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <utility>

#include <spdlog/spdlog.h>

#include "osea/osea.h"

namespace osea {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<double> MinCost(const MilpInstance& instance) {
  std::vector<double> c(instance.cost().begin(), instance.cost().end());
  if (instance.sense() == ObjectiveSense::kMaximize) {
    for (double& v : c) v = -v;
  }
  return c;
}

std::vector<double> SplicedCost(std::span<const double> cost, const ScalingState& state) {
  std::vector<double> out(cost.begin(), cost.end());
  for (size_t k = 0; k < state.integer_vars.size(); ++k) out[state.integer_vars[k]] = state.c_bar[k];
  return out;
}

// Remaining share of a budget after `elapsed` seconds and `used` nodes,
// never less than one second or one node.
Budget Remaining(const Budget& total, double elapsed, int64_t used) {
  Budget out;
  if (total.has_time_limit()) out.seconds = std::max(1.0, total.seconds - elapsed);
  if (total.has_node_limit()) out.nodes = std::max<int64_t>(1, total.nodes - used);
  return out;
}

}  // namespace

std::string_view ToString(StopReason reason) {
  switch (reason) {
    case StopReason::kCoefficientStall: return "coefficient-stall";
    case StopReason::kIterationCap: return "iteration-cap";
    case StopReason::kTimeBudget: return "time-budget";
    case StopReason::kLpInfeasible: return "lp-infeasible";
    case StopReason::kLpUnbounded: return "lp-unbounded";
    case StopReason::kLpFailure: return "lp-failure";
    case StopReason::kNumericalFailure: return "numerical-failure";
  }
  return "?";
}

std::string_view ToString(Provenance provenance) {
  switch (provenance) {
    case Provenance::kSeededIncumbent: return "seeded-incumbent";
    case Provenance::kScalingBest: return "scaling-best";
    case Provenance::kScalingWorst: return "scaling-worst";
    case Provenance::kScalingMedian: return "scaling-median";
  }
  return "?";
}

std::string_view ToString(SolutionSource source) {
  switch (source) {
    case SolutionSource::kNone: return "none";
    case SolutionSource::kReducedSolve: return "reduced-solve";
    case SolutionSource::kSeededIncumbent: return "seeded-incumbent";
    case SolutionSource::kFullSolve: return "full-solve";
  }
  return "?";
}

ScalingState InitScaledCosts(const MilpInstance& instance) {
  ScalingState state;
  state.integer_vars = instance.integer_indices();
  if (state.integer_vars.empty()) {
    throw NotApplicableError("objective scaling needs at least one integer variable");
  }
  const std::vector<double> cost = MinCost(instance);
  double m = 0.0;
  for (int j : state.integer_vars) m += std::abs(cost[j]);
  state.m_clamped = m < 1.0;
  state.m = std::max(m, 1.0);
  state.c_bar.reserve(state.integer_vars.size());
  for (int j : state.integer_vars) state.c_bar.push_back(cost[j] / state.m);
  return state;
}

ScalingState ScalingUpdate(const ScalingState& state, std::span<const double> x,
                           std::span<const double> cost, double support_tol) {
  if (x.size() != cost.size()) throw DimensionError("relaxation and cost lengths differ");
  ScalingState next = state;
  ScalingIterate iterate;
  iterate.scaled_costs = state.c_bar;
  iterate.x.assign(x.begin(), x.end());
  double original = 0.0;
  for (size_t j = 0; j < x.size(); ++j) original += cost[j] * x[j];
  double scaled = original;
  for (size_t k = 0; k < state.integer_vars.size(); ++k) {
    const int j = state.integer_vars[k];
    scaled += (state.c_bar[k] - cost[j]) * x[j];
    if (x[j] < -support_tol) {
      throw NumericalError("relaxation value " + std::to_string(x[j]) + " of column " +
                           std::to_string(j) + " is negative");
    }
    if (x[j] > support_tol) next.c_bar[k] = cost[j] / (x[j] + 1.0);
  }
  iterate.original_objective = original;
  iterate.scaled_objective = scaled;
  next.history.push_back(std::move(iterate));
  ++next.iteration;
  return next;
}

MilpInstance BuildScaledLp(const MilpInstance& instance, const ScalingState& state) {
  MilpData data = Relax(Normalize(instance)).data();
  data.cost = SplicedCost(data.cost, state);
  return MilpInstance(std::move(data));
}

ScalingPhaseResult RunScalingPhase(const MilpInstance& instance, const OseaOptions& options) {
  if (options.n_max < 1) throw InputError("n_max must be at least 1");
  const auto start = Clock::now();
  const MilpInstance normalized = Normalize(instance);
  const std::vector<double> cost(normalized.cost().begin(), normalized.cost().end());
  ScalingPhaseResult out;
  out.state = InitScaledCosts(normalized);

  LpOptions lp_options = options.lp;
  lp_options.warm_start = options.warm_start;
  SimplexSolver solver(Relax(normalized), lp_options);

  for (;;) {
    if (out.state.iteration >= options.n_max) {
      out.reason = StopReason::kIterationCap;
      break;
    }
    if (SecondsSince(start) >= options.scaling_time_budget) {
      out.reason = StopReason::kTimeBudget;
      break;
    }
    solver.SetObjective(SplicedCost(cost, out.state));
    const LpResult lp = solver.Solve();
    out.lp_iterations += lp.iterations;
    if (lp.warm_started) ++out.warm_started_solves;
    if (lp.status == LpStatus::kInfeasible) {
      out.reason = StopReason::kLpInfeasible;
      out.diagnostic = "LP relaxation is infeasible";
      out.state.history.clear();
      break;
    }
    if (lp.status == LpStatus::kUnbounded) {
      out.reason = StopReason::kLpUnbounded;
      out.diagnostic = "scaled LP unbounded at iteration " + std::to_string(out.state.iteration);
      break;
    }
    if (lp.status != LpStatus::kOptimal) {
      out.reason = StopReason::kLpFailure;
      out.diagnostic = "scaled LP hit its iteration limit at iteration " +
                       std::to_string(out.state.iteration);
      break;
    }
    ScalingState next;
    try {
      next = ScalingUpdate(out.state, lp.x, cost, options.support_tol);
    } catch (const NumericalError& e) {
      out.reason = StopReason::kNumericalFailure;
      out.diagnostic = e.what();
      break;
    }
    const bool stalled = next.c_bar == out.state.c_bar;
    out.state = std::move(next);
    const ScalingIterate& last = out.state.history.back();
    spdlog::debug("scaling: iteration {} scaled {:.10g} original {:.10g}", out.state.iteration - 1,
                  last.scaled_objective, last.original_objective);
    if (stalled) {
      out.reason = StopReason::kCoefficientStall;
      break;
    }
  }
  return out;
}

std::vector<SubsetPick> SelectSubset(const ScalingState& state) {
  const int k = static_cast<int>(state.history.size());
  if (k == 0) return {};
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return state.history[a].original_objective < state.history[b].original_objective;
  });
  // Earliest iteration among those tied for the worst objective.
  const double worst_value = state.history[order.back()].original_objective;
  const int worst = *std::find_if(order.begin(), order.end(), [&](int i) {
    return state.history[i].original_objective == worst_value;
  });
  const SubsetPick candidates[] = {
      {order.front(), Provenance::kScalingBest},
      {worst, Provenance::kScalingWorst},
      {order[(k - 1) / 2], Provenance::kScalingMedian},
  };
  std::vector<SubsetPick> picks;
  for (const SubsetPick& c : candidates) {
    const bool seen = std::any_of(picks.begin(), picks.end(),
                                  [&](const SubsetPick& p) { return p.iteration == c.iteration; });
    if (!seen) picks.push_back(c);
  }
  return picks;
}

std::vector<int> AggregateFixSet(const Ensemble& ensemble, const MilpInstance& instance,
                                 double support_tol) {
  if (ensemble.members.empty()) throw PreconditionError("cannot aggregate an empty ensemble");
  for (const EnsembleMember& member : ensemble.members) {
    if (static_cast<int>(member.solution.x.size()) != instance.num_vars()) {
      throw DimensionError("ensemble member length does not match the instance");
    }
  }
  std::vector<int> fix_set;
  for (int j : instance.integer_indices()) {
    if (instance.lower()[j] > 0.0 || instance.upper()[j] < 0.0) continue;
    const bool unused = std::all_of(
        ensemble.members.begin(), ensemble.members.end(),
        [&](const EnsembleMember& m) { return std::abs(m.solution.x[j]) <= support_tol; });
    if (unused) fix_set.push_back(j);
  }
  return fix_set;
}

OseaResult RunOsea(const MilpInstance& instance, const OseaOptions& options) {
  const auto start = Clock::now();
  if (instance.integer_indices().empty()) {
    throw NotApplicableError("objective scaling needs at least one integer variable");
  }
  if (!(options.support_tol > 0.0)) throw InputError("support tolerance must be positive");
  const MilpInstance normalized = Normalize(instance);
  OseaResult result;
  const std::vector<int> integers = normalized.integer_indices();
  result.integer_count = static_cast<int>(integers.size());
  result.all_integer_costs_zero = std::all_of(
      integers.begin(), integers.end(), [&](int j) { return normalized.cost()[j] == 0.0; });

  Ensemble ensemble;
  const IncumbentSearch seeded = FindIncumbent(normalized, options.incumbent_budget, options.lp);
  result.timings.incumbent = SecondsSince(start);
  result.nodes += seeded.nodes;
  result.lp_iterations += seeded.lp_iterations;
  if (seeded.incumbent) {
    result.incumbent_objective = seeded.incumbent->objective;
    ensemble.members.push_back({*seeded.incumbent, Provenance::kSeededIncumbent, -1});
  }
  if (seeded.proven_infeasible) {
    result.proven_infeasible = true;
    result.diagnostic = "instance proven infeasible during the incumbent search";
    result.timings.total = SecondsSince(start);
    return result;
  }

  const auto scaling_start = Clock::now();
  OseaOptions scaling_options = options;
  if (options.total_budget.has_time_limit()) {
    scaling_options.scaling_time_budget =
        std::min(options.scaling_time_budget, options.total_budget.seconds - SecondsSince(start));
  }
  ScalingPhaseResult phase = RunScalingPhase(normalized, scaling_options);
  result.timings.scaling = SecondsSince(scaling_start);
  result.lp_iterations += phase.lp_iterations;
  result.iterations_run = phase.state.iteration;
  result.stop_reason = phase.reason;
  result.diagnostic = phase.diagnostic;
  result.m_clamped = phase.state.m_clamped;

  const auto aggregation_start = Clock::now();
  for (const SubsetPick& pick : SelectSubset(phase.state)) {
    ensemble.members.push_back(
        {MakeSolution(normalized, phase.state.history[pick.iteration].x), pick.role, pick.iteration});
  }
  result.scaling = std::move(phase.state);

  const Budget reduced_budget =
      Remaining(options.total_budget, SecondsSince(start), result.nodes);
  BnbOptions bnb;
  bnb.limit = reduced_budget;
  bnb.lp = options.lp;
  BnbResult solved;
  if (ensemble.members.empty()) {
    result.fallback_full_solve = true;
    result.timings.aggregation = SecondsSince(aggregation_start);
    const auto solve_start = Clock::now();
    solved = SolveMip(normalized, bnb);
    result.timings.reduced_solve = SecondsSince(solve_start);
    if (solved.status == BnbStatus::kInfeasible) result.proven_infeasible = true;
  } else {
    result.fix_set = AggregateFixSet(ensemble, normalized, options.support_tol);
    result.gamma = static_cast<double>(result.fix_set.size()) / result.integer_count;
    const MilpInstance reduced = FixVariablesToZero(normalized, result.fix_set);
    result.timings.aggregation = SecondsSince(aggregation_start);
    const auto solve_start = Clock::now();
    solved = SolveMip(reduced, bnb);
    result.timings.reduced_solve = SecondsSince(solve_start);
  }
  result.reduced_status = solved.status;
  result.nodes += solved.nodes;
  result.lp_iterations += solved.lp_iterations;
  result.ensemble = std::move(ensemble.members);

  if (solved.incumbent) {
    // Re-derive status and objective against the full instance.
    Solution s = MakeSolution(normalized, solved.incumbent->x);
    if (s.status == SolutionStatus::kFeasible) {
      result.solution = std::move(s);
      result.source = result.fallback_full_solve ? SolutionSource::kFullSolve
                                                 : SolutionSource::kReducedSolve;
    }
  }
  if (seeded.incumbent &&
      (!result.solution || seeded.incumbent->objective < result.solution->objective)) {
    result.solution = *seeded.incumbent;
    result.source = SolutionSource::kSeededIncumbent;
  }
  if (result.solution) result.objective = result.solution->objective;
  result.timings.total = SecondsSince(start);
  return result;
}

}  // namespace osea
