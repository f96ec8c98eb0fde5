// Bounded-variable primal simplex for LP relaxations.
//
// Each row i gets a logical variable s_i = a_i.x bounded by the row's
// activity limits, so the working system is A x - s = 0 with simple bounds
// on every column. Phase one adds one artificial per violated row, phase two
// optimizes the true costs. The basis inverse is kept dense and refactored
// periodically, which is fine for a few thousand rows and no more.

#ifndef OSEA_LP_H_
#define OSEA_LP_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "osea/model.h"

namespace osea {

struct LpOptions {
  // 0 selects 50 * (n + m).
  int64_t max_iterations = 0;
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-7;
  int refactor_interval = 100;
  // Reuse the previous optimal basis when only costs or bounds changed.
  bool warm_start = true;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

std::string_view ToString(LpStatus status);

enum class BasisStatus : uint8_t { kBasic, kAtLower, kAtUpper, kAtZero };

struct LpResult {
  LpStatus status = LpStatus::kIterationLimit;
  std::vector<double> x;
  double objective = 0.0;
  int64_t iterations = 0;
  // Sum of artificials when phase one finished.
  double phase_one_objective = 0.0;
  bool warm_started = false;
  // Columns first, then one logical per row. Filled when Optimal.
  std::vector<double> reduced_costs;
  std::vector<BasisStatus> basis;
  std::vector<double> row_duals;
};

// Drops integrality: binaries keep [0, 1], integers keep their bounds.
MilpInstance Relax(const MilpInstance& instance);

// Reusable solver context over one continuous instance. Costs and column
// bounds can be overridden between solves; the last optimal basis is reused
// when warm starting is enabled. Not shareable across threads.
class SimplexSolver {
 public:
  SimplexSolver(const MilpInstance& relaxed, const LpOptions& options = {});

  void SetObjective(std::span<const double> cost);
  void SetColumnBounds(int col, double lower, double upper);
  void ResetColumnBounds();
  void ClearBasis() { has_basis_ = false; }

  LpResult Solve();

 private:
  enum class Phase { kOne, kTwo };
  enum class IterateOutcome { kOptimal, kUnbounded, kIterationLimit, kSingular };

  int num_total() const { return n_ + 2 * m_; }
  bool IsArtificial(int j) const { return j >= n_ + m_; }

  // Column j of [A  -I  diag(sigma)] scattered into a dense row vector.
  template <typename Fn>
  void ForEachInColumn(int j, Fn&& fn) const;
  double ColumnDot(int j, std::span<const double> y) const;

  bool TryWarmStart();
  void ColdStart();
  bool Refactor();
  void ComputeBasicValues();
  void SetNonbasicValue(int j);
  double PhaseCost(Phase phase, int j) const;
  IterateOutcome Iterate(Phase phase);
  double ArtificialSum() const;
  bool BasicsFeasible() const;
  void ExportBasis();
  LpResult Finish(LpStatus status);

  LpOptions options_;
  int n_ = 0;
  int m_ = 0;
  int64_t max_iterations_ = 0;

  std::vector<int> col_start_;
  std::vector<int> col_row_;
  std::vector<double> col_val_;
  std::vector<double> cost_;
  std::vector<double> base_lower_;
  std::vector<double> base_upper_;

  // Working state over n + m + m variables.
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> x_;
  std::vector<BasisStatus> status_;
  std::vector<double> artificial_sign_;
  std::vector<int> head_;
  std::vector<double> binv_;
  std::vector<double> work_;
  std::vector<double> duals_;

  bool has_basis_ = false;
  std::vector<BasisStatus> saved_basis_;

  int64_t iterations_ = 0;
  int64_t degenerate_pivots_ = 0;
  int pivots_since_refactor_ = 0;
  bool bland_ = false;
  double phase_one_objective_ = 0.0;
  bool warm_started_ = false;
};

// One-shot solve; the instance must not contain integer variables.
LpResult SolveLp(const MilpInstance& instance, const LpOptions& options = {});

}  // namespace osea

#endif  // OSEA_LP_H_
