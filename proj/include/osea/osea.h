// Objective scaling ensemble heuristic.
//
// A sequence of LP relaxations is solved in which the cost of every integer
// variable is rescaled after each solve by c_j / (x_j + 1) wherever the
// variable was used. A spread of those iterates (best, worst and median by
// true objective), optionally joined by a quickly found incumbent, forms an
// ensemble; integer variables that are zero in every member get fixed to
// zero and the reduced problem is solved exactly.

#ifndef OSEA_OSEA_H_
#define OSEA_OSEA_H_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "osea/lp.h"
#include "osea/mip.h"
#include "osea/model.h"

namespace osea {

// The instance has no integer variables, so there is nothing to scale.
class NotApplicableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A relaxation value fell below zero by more than the support tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScalingIterate {
  // Integer costs the LP was solved with, aligned with integer_vars.
  std::vector<double> scaled_costs;
  std::vector<double> x;
  double scaled_objective = 0.0;
  double original_objective = 0.0;
};

struct ScalingState {
  std::vector<int> integer_vars;
  std::vector<double> c_bar;
  int iteration = 0;
  double m = 1.0;
  bool m_clamped = false;
  std::vector<ScalingIterate> history;
};

enum class StopReason {
  kCoefficientStall,
  kIterationCap,
  kTimeBudget,
  kLpInfeasible,
  kLpUnbounded,
  kLpFailure,
  kNumericalFailure,
};

std::string_view ToString(StopReason reason);

enum class SubsetRule { kBestWorstMedian };

struct OseaOptions {
  int n_max = 50;
  // No separate cap by default; the total budget still applies.
  double scaling_time_budget = kInfinity;
  Budget incumbent_budget = Budget::Seconds(1.0);
  Budget total_budget = Budget::Seconds(60.0);
  double support_tol = 1e-9;
  SubsetRule subset_rule = SubsetRule::kBestWorstMedian;
  bool warm_start = true;
  LpOptions lp;
};

enum class Provenance { kSeededIncumbent, kScalingBest, kScalingWorst, kScalingMedian };

std::string_view ToString(Provenance provenance);

struct EnsembleMember {
  Solution solution;
  Provenance provenance = Provenance::kSeededIncumbent;
  // Scaling iteration the member came from, -1 for the seeded incumbent.
  int iteration = -1;
};

struct Ensemble {
  std::vector<EnsembleMember> members;
};

struct SubsetPick {
  int iteration;
  Provenance role;
};

struct ScalingPhaseResult {
  ScalingState state;
  StopReason reason = StopReason::kIterationCap;
  std::string diagnostic;
  int64_t lp_iterations = 0;
  int warm_started_solves = 0;
};

struct PhaseTimings {
  double incumbent = 0.0;
  double scaling = 0.0;
  double aggregation = 0.0;
  double reduced_solve = 0.0;
  double total = 0.0;
};

enum class SolutionSource { kNone, kReducedSolve, kSeededIncumbent, kFullSolve };

std::string_view ToString(SolutionSource source);

struct OseaResult {
  std::optional<Solution> solution;
  // Minimization orientation, no offset; ReportedObjective() converts.
  std::optional<double> objective;
  SolutionSource source = SolutionSource::kNone;
  double gamma = 0.0;
  int integer_count = 0;
  std::vector<int> fix_set;
  int iterations_run = 0;
  StopReason stop_reason = StopReason::kIterationCap;
  std::string diagnostic;
  PhaseTimings timings;
  std::optional<BnbStatus> reduced_status;
  std::optional<double> incumbent_objective;
  std::vector<EnsembleMember> ensemble;
  ScalingState scaling;
  bool fallback_full_solve = false;
  bool proven_infeasible = false;
  bool m_clamped = false;
  bool all_integer_costs_zero = false;
  int64_t nodes = 0;
  int64_t lp_iterations = 0;
};

// M = sum |c_j| over integer columns, clamped to at least 1; c_bar = c / M.
ScalingState InitScaledCosts(const MilpInstance& instance);

// c_bar_j = c_j / (x_j + 1) wherever x_j > support_tol; appends x to the
// history together with its scaled and true objective. `cost` is the full
// minimization-oriented cost vector.
ScalingState ScalingUpdate(const ScalingState& state, std::span<const double> x,
                           std::span<const double> cost, double support_tol);

// Relaxation whose integer costs are the current scaled ones.
MilpInstance BuildScaledLp(const MilpInstance& instance, const ScalingState& state);

ScalingPhaseResult RunScalingPhase(const MilpInstance& instance, const OseaOptions& options);

// Best, worst and lower-median history entries by true objective, earliest
// iteration first among equals. Repeated entries are dropped.
std::vector<SubsetPick> SelectSubset(const ScalingState& state);

// Integer columns that are zero in every member and whose bounds admit zero.
std::vector<int> AggregateFixSet(const Ensemble& ensemble, const MilpInstance& instance,
                                 double support_tol);

OseaResult RunOsea(const MilpInstance& instance, const OseaOptions& options = {});

}  // namespace osea

#endif  // OSEA_OSEA_H_
