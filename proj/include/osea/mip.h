// Best-bound branch-and-bound over the simplex relaxation.

#ifndef OSEA_MIP_H_
#define OSEA_MIP_H_

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "osea/lp.h"
#include "osea/model.h"

namespace osea {

// A work limit in wall-clock seconds and/or explored nodes. Node limits are
// what tests and reproducible benchmarks use; wall-clock runs are not
// repeatable.
struct Budget {
  double seconds = kInfinity;
  int64_t nodes = std::numeric_limits<int64_t>::max();

  static Budget Seconds(double s) { return {s, std::numeric_limits<int64_t>::max()}; }
  static Budget Nodes(int64_t n) { return {kInfinity, n}; }
  static Budget Unlimited() { return {}; }

  // "1.5" means seconds, "200nodes" means nodes. Throws InputError.
  static Budget Parse(std::string_view text);

  bool has_time_limit() const { return seconds < kInfinity; }
  bool has_node_limit() const { return nodes < std::numeric_limits<int64_t>::max(); }
  std::string ToString() const;

  bool operator==(const Budget&) const = default;
};

struct BnbOptions {
  Budget limit;
  double gap_tolerance = 1e-6;
  double integrality_tol = 1e-6;
  bool root_rounding = true;
  LpOptions lp;
};

enum class BnbStatus { kOptimal, kFeasible, kInfeasible, kNoSolutionFound };

std::string_view ToString(BnbStatus status);

struct BnbProgress {
  int64_t nodes = 0;
  double incumbent = kInfinity;
  double bound = -kInfinity;
};

struct BnbResult {
  BnbStatus status = BnbStatus::kNoSolutionFound;
  std::optional<Solution> incumbent;
  // Best proven lower bound, minimization orientation, no offset.
  double bound = -kInfinity;
  int64_t nodes = 0;
  double wall_time = 0.0;
  int64_t lp_iterations = 0;
  double root_lp_objective = -kInfinity;
  bool root_lp_unbounded = false;
  // One entry per incumbent improvement.
  std::vector<BnbProgress> trace;
};

BnbResult SolveMip(const MilpInstance& instance, const BnbOptions& options = {});

struct IncumbentSearch {
  std::optional<Solution> incumbent;
  bool proven_infeasible = false;
  int64_t nodes = 0;
  int64_t lp_iterations = 0;
  double wall_time = 0.0;
};

// Short branch-and-bound run that only cares about finding a feasible point.
IncumbentSearch FindIncumbent(const MilpInstance& instance, const Budget& budget,
                              const LpOptions& lp = {});

}  // namespace osea

#endif  // OSEA_MIP_H_
