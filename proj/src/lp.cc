#include "osea/lp.h"

#include <algorithm>
#include <cmath>
#include <utility>

namespace osea {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kSingularTol = 1e-11;
constexpr double kRatioTieTol = 1e-12;
constexpr double kDegenerateStep = 1e-12;

}  // namespace

std::string_view ToString(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "Optimal";
    case LpStatus::kInfeasible: return "Infeasible";
    case LpStatus::kUnbounded: return "Unbounded";
    case LpStatus::kIterationLimit: return "IterationLimit";
  }
  return "?";
}

MilpInstance Relax(const MilpInstance& instance) {
  if (Classify(instance) == ProblemClass::kLp) return instance;
  MilpData data = instance.data();
  std::fill(data.kinds.begin(), data.kinds.end(), VarKind::kContinuous);
  return MilpInstance(std::move(data));
}

SimplexSolver::SimplexSolver(const MilpInstance& relaxed, const LpOptions& options)
    : options_(options), n_(relaxed.num_vars()), m_(relaxed.num_rows()) {
  if (Classify(relaxed) != ProblemClass::kLp) {
    throw InputError("simplex solver needs a continuous instance; relax it first");
  }
  if (options_.feasibility_tol <= 0.0 || options_.optimality_tol <= 0.0) {
    throw InputError("LP tolerances must be positive");
  }
  max_iterations_ = options_.max_iterations > 0
                        ? options_.max_iterations
                        : 50 * static_cast<int64_t>(n_ + m_);

  col_start_.assign(n_ + 1, 0);
  for (const Triplet& t : relaxed.entries()) ++col_start_[t.col + 1];
  for (int j = 0; j < n_; ++j) col_start_[j + 1] += col_start_[j];
  col_row_.resize(relaxed.num_entries());
  col_val_.resize(relaxed.num_entries());
  std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
  for (const Triplet& t : relaxed.entries()) {
    const int k = fill[t.col]++;
    col_row_[k] = t.row;
    col_val_[k] = t.value;
  }

  const double sign = relaxed.sense() == ObjectiveSense::kMaximize ? -1.0 : 1.0;
  cost_.resize(n_);
  for (int j = 0; j < n_; ++j) cost_[j] = sign * relaxed.cost()[j];

  base_lower_.resize(n_ + m_);
  base_upper_.resize(n_ + m_);
  for (int j = 0; j < n_; ++j) {
    base_lower_[j] = relaxed.lower()[j];
    base_upper_[j] = relaxed.upper()[j];
  }
  for (int i = 0; i < m_; ++i) {
    base_lower_[n_ + i] = relaxed.rows()[i].lower();
    base_upper_[n_ + i] = relaxed.rows()[i].upper();
  }
  lower_.assign(num_total(), 0.0);
  upper_.assign(num_total(), 0.0);
  std::copy(base_lower_.begin(), base_lower_.end(), lower_.begin());
  std::copy(base_upper_.begin(), base_upper_.end(), upper_.begin());
  x_.assign(num_total(), 0.0);
  status_.assign(num_total(), BasisStatus::kAtLower);
  artificial_sign_.assign(m_, 1.0);
  head_.assign(m_, 0);
  binv_.assign(static_cast<size_t>(m_) * m_, 0.0);
  work_.assign(m_, 0.0);
  duals_.assign(m_, 0.0);
}

void SimplexSolver::SetObjective(std::span<const double> cost) {
  if (static_cast<int>(cost.size()) != n_) throw DimensionError("objective length mismatch");
  std::copy(cost.begin(), cost.end(), cost_.begin());
}

void SimplexSolver::SetColumnBounds(int col, double lower, double upper) {
  if (col < 0 || col >= n_) throw DimensionError("column index out of range");
  lower_[col] = lower;
  upper_[col] = upper;
}

void SimplexSolver::ResetColumnBounds() {
  std::copy(base_lower_.begin(), base_lower_.begin() + n_, lower_.begin());
  std::copy(base_upper_.begin(), base_upper_.begin() + n_, upper_.begin());
}

template <typename Fn>
void SimplexSolver::ForEachInColumn(int j, Fn&& fn) const {
  if (j < n_) {
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) fn(col_row_[k], col_val_[k]);
  } else if (j < n_ + m_) {
    fn(j - n_, -1.0);
  } else {
    fn(j - n_ - m_, artificial_sign_[j - n_ - m_]);
  }
}

double SimplexSolver::ColumnDot(int j, std::span<const double> y) const {
  double total = 0.0;
  ForEachInColumn(j, [&](int row, double v) { total += y[row] * v; });
  return total;
}

double SimplexSolver::PhaseCost(Phase phase, int j) const {
  if (phase == Phase::kOne) return IsArtificial(j) ? 1.0 : 0.0;
  return j < n_ ? cost_[j] : 0.0;
}

void SimplexSolver::SetNonbasicValue(int j) {
  BasisStatus& s = status_[j];
  const bool has_lower = std::isfinite(lower_[j]);
  const bool has_upper = std::isfinite(upper_[j]);
  if (s == BasisStatus::kAtUpper && !has_upper) s = BasisStatus::kAtLower;
  if (s == BasisStatus::kAtLower && !has_lower) s = has_upper ? BasisStatus::kAtUpper : BasisStatus::kAtZero;
  if (s == BasisStatus::kAtZero && has_lower) s = BasisStatus::kAtLower;
  if (s == BasisStatus::kAtZero && has_upper) s = BasisStatus::kAtUpper;
  switch (s) {
    case BasisStatus::kAtLower: x_[j] = lower_[j]; break;
    case BasisStatus::kAtUpper: x_[j] = upper_[j]; break;
    default: x_[j] = 0.0; break;
  }
}

bool SimplexSolver::Refactor() {
  pivots_since_refactor_ = 0;
  if (m_ == 0) return true;
  const size_t mm = static_cast<size_t>(m_);
  std::vector<double> b(mm * mm, 0.0);
  for (int c = 0; c < m_; ++c) {
    ForEachInColumn(head_[c], [&](int row, double v) { b[row * mm + c] = v; });
  }
  std::vector<double>& inv = binv_;
  std::fill(inv.begin(), inv.end(), 0.0);
  for (size_t i = 0; i < mm; ++i) inv[i * mm + i] = 1.0;
  // Gauss-Jordan with partial pivoting on b, mirrored onto inv.
  for (size_t col = 0; col < mm; ++col) {
    size_t pivot = col;
    double best = std::abs(b[col * mm + col]);
    for (size_t r = col + 1; r < mm; ++r) {
      if (std::abs(b[r * mm + col]) > best) {
        best = std::abs(b[r * mm + col]);
        pivot = r;
      }
    }
    if (best < kSingularTol) return false;
    if (pivot != col) {
      for (size_t k = 0; k < mm; ++k) {
        std::swap(b[pivot * mm + k], b[col * mm + k]);
        std::swap(inv[pivot * mm + k], inv[col * mm + k]);
      }
    }
    const double scale = 1.0 / b[col * mm + col];
    for (size_t k = 0; k < mm; ++k) {
      b[col * mm + k] *= scale;
      inv[col * mm + k] *= scale;
    }
    for (size_t r = 0; r < mm; ++r) {
      if (r == col) continue;
      const double f = b[r * mm + col];
      if (f == 0.0) continue;
      for (size_t k = 0; k < mm; ++k) {
        b[r * mm + k] -= f * b[col * mm + k];
        inv[r * mm + k] -= f * inv[col * mm + k];
      }
    }
  }
  return true;
}

void SimplexSolver::ComputeBasicValues() {
  std::fill(work_.begin(), work_.end(), 0.0);
  for (int j = 0; j < num_total(); ++j) {
    if (status_[j] == BasisStatus::kBasic || x_[j] == 0.0) continue;
    const double xj = x_[j];
    ForEachInColumn(j, [&](int row, double v) { work_[row] += v * xj; });
  }
  const size_t mm = static_cast<size_t>(m_);
  for (int i = 0; i < m_; ++i) {
    double total = 0.0;
    for (int k = 0; k < m_; ++k) total += binv_[i * mm + k] * work_[k];
    x_[head_[i]] = -total;
  }
}

bool SimplexSolver::BasicsFeasible() const {
  for (int i = 0; i < m_; ++i) {
    const int b = head_[i];
    const double v = x_[b];
    if (v < lower_[b] - options_.feasibility_tol * (1.0 + std::abs(lower_[b]))) return false;
    if (v > upper_[b] + options_.feasibility_tol * (1.0 + std::abs(upper_[b]))) return false;
  }
  return true;
}

double SimplexSolver::ArtificialSum() const {
  double total = 0.0;
  for (int j = n_ + m_; j < num_total(); ++j) total += x_[j];
  return total;
}

bool SimplexSolver::TryWarmStart() {
  if (static_cast<int>(saved_basis_.size()) != n_ + m_) return false;
  int basic = 0;
  for (int j = 0; j < n_ + m_; ++j) {
    if (saved_basis_[j] == BasisStatus::kBasic) {
      if (basic == m_) return false;
      head_[basic++] = j;
    }
  }
  if (basic != m_) return false;
  for (int j = 0; j < n_ + m_; ++j) {
    status_[j] = saved_basis_[j];
    if (status_[j] != BasisStatus::kBasic) SetNonbasicValue(j);
  }
  for (int j = n_ + m_; j < num_total(); ++j) {
    lower_[j] = upper_[j] = 0.0;
    status_[j] = BasisStatus::kAtLower;
    x_[j] = 0.0;
  }
  if (!Refactor()) return false;
  ComputeBasicValues();
  return BasicsFeasible();
}

void SimplexSolver::ColdStart() {
  for (int j = 0; j < n_; ++j) {
    status_[j] = BasisStatus::kAtLower;
    SetNonbasicValue(j);
  }
  std::fill(work_.begin(), work_.end(), 0.0);
  for (int j = 0; j < n_; ++j) {
    if (x_[j] == 0.0) continue;
    const double xj = x_[j];
    ForEachInColumn(j, [&](int row, double v) { work_[row] += v * xj; });
  }
  std::fill(binv_.begin(), binv_.end(), 0.0);
  const size_t mm = static_cast<size_t>(m_);
  for (int i = 0; i < m_; ++i) {
    const int logical = n_ + i;
    const int artificial = n_ + m_ + i;
    const double activity = work_[i];
    const double lo = lower_[logical];
    const double up = upper_[logical];
    if (activity >= lo && activity <= up) {
      status_[logical] = BasisStatus::kBasic;
      x_[logical] = activity;
      head_[i] = logical;
      binv_[i * mm + i] = -1.0;
      artificial_sign_[i] = 1.0;
      lower_[artificial] = upper_[artificial] = 0.0;
      status_[artificial] = BasisStatus::kAtLower;
      x_[artificial] = 0.0;
      continue;
    }
    const bool below = activity < lo;
    const double bound = below ? lo : up;
    status_[logical] = below ? BasisStatus::kAtLower : BasisStatus::kAtUpper;
    if (lo == up) status_[logical] = BasisStatus::kAtLower;
    x_[logical] = bound;
    artificial_sign_[i] = bound > activity ? 1.0 : -1.0;
    lower_[artificial] = 0.0;
    upper_[artificial] = kInfinity;
    status_[artificial] = BasisStatus::kBasic;
    x_[artificial] = std::abs(bound - activity);
    head_[i] = artificial;
    binv_[i * mm + i] = artificial_sign_[i];
  }
  pivots_since_refactor_ = 0;
}

SimplexSolver::IterateOutcome SimplexSolver::Iterate(Phase phase) {
  const size_t mm = static_cast<size_t>(m_);
  const int total = num_total();
  std::vector<double> y(m_);
  std::vector<double> alpha(m_);
  const double tol = options_.optimality_tol;
  for (;;) {
    if (pivots_since_refactor_ >= options_.refactor_interval) {
      if (!Refactor()) return IterateOutcome::kSingular;
      ComputeBasicValues();
    }

    std::fill(y.begin(), y.end(), 0.0);
    for (int i = 0; i < m_; ++i) {
      const double cb = PhaseCost(phase, head_[i]);
      if (cb == 0.0) continue;
      for (int k = 0; k < m_; ++k) y[k] += cb * binv_[i * mm + k];
    }

    int entering = -1;
    double entering_d = 0.0;
    double best_score = 0.0;
    for (int j = 0; j < total; ++j) {
      const BasisStatus s = status_[j];
      if (s == BasisStatus::kBasic || lower_[j] == upper_[j]) continue;
      const double d = PhaseCost(phase, j) - ColumnDot(j, y);
      const bool eligible = (s == BasisStatus::kAtLower && d < -tol) ||
                            (s == BasisStatus::kAtUpper && d > tol) ||
                            (s == BasisStatus::kAtZero && std::abs(d) > tol);
      if (!eligible) continue;
      if (bland_) {
        entering = j;
        entering_d = d;
        break;
      }
      if (std::abs(d) > best_score) {
        best_score = std::abs(d);
        entering = j;
        entering_d = d;
      }
    }

    if (entering < 0) {
      if (pivots_since_refactor_ > 0) {
        // Confirm optimality against a fresh factorization.
        if (!Refactor()) return IterateOutcome::kSingular;
        ComputeBasicValues();
        if (!BasicsFeasible()) return IterateOutcome::kSingular;
        continue;
      }
      duals_ = y;
      return IterateOutcome::kOptimal;
    }
    if (iterations_ >= max_iterations_) return IterateOutcome::kIterationLimit;

    const int q = entering;
    const double dir = entering_d < 0.0 ? 1.0 : -1.0;
    std::fill(alpha.begin(), alpha.end(), 0.0);
    ForEachInColumn(q, [&](int row, double v) {
      for (int i = 0; i < m_; ++i) alpha[i] += binv_[i * mm + row] * v;
    });

    const double flip = (std::isfinite(lower_[q]) && std::isfinite(upper_[q]))
                            ? upper_[q] - lower_[q]
                            : kInfinity;
    int leaving_row = -1;
    double best_ratio = kInfinity;
    double best_pivot = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double a = alpha[i];
      if (std::abs(a) < kPivotTol) continue;
      const double rate = -dir * a;
      const int b = head_[i];
      double ratio;
      if (rate < 0.0) {
        if (!std::isfinite(lower_[b])) continue;
        ratio = (x_[b] - lower_[b]) / -rate;
      } else {
        if (!std::isfinite(upper_[b])) continue;
        ratio = (upper_[b] - x_[b]) / rate;
      }
      ratio = std::max(ratio, 0.0);
      bool take = false;
      if (leaving_row < 0 || ratio < best_ratio - kRatioTieTol) {
        take = true;
      } else if (ratio <= best_ratio + kRatioTieTol) {
        take = bland_ ? b < head_[leaving_row] : std::abs(a) > best_pivot;
      }
      if (take) {
        leaving_row = i;
        best_ratio = ratio;
        best_pivot = std::abs(a);
      }
    }

    if (leaving_row < 0 && !std::isfinite(flip)) return IterateOutcome::kUnbounded;
    ++iterations_;

    if (leaving_row < 0 || flip <= best_ratio) {
      for (int i = 0; i < m_; ++i) x_[head_[i]] -= dir * flip * alpha[i];
      if (dir > 0.0) {
        x_[q] = upper_[q];
        status_[q] = BasisStatus::kAtUpper;
      } else {
        x_[q] = lower_[q];
        status_[q] = BasisStatus::kAtLower;
      }
      continue;
    }

    const double step = best_ratio;
    for (int i = 0; i < m_; ++i) x_[head_[i]] -= dir * step * alpha[i];
    x_[q] += dir * step;
    const int r = leaving_row;
    const int leaving = head_[r];
    if (-dir * alpha[r] < 0.0) {
      status_[leaving] = BasisStatus::kAtLower;
      x_[leaving] = lower_[leaving];
    } else {
      status_[leaving] = BasisStatus::kAtUpper;
      x_[leaving] = upper_[leaving];
    }
    if (IsArtificial(leaving)) {
      // Artificials that leave never come back.
      lower_[leaving] = upper_[leaving] = 0.0;
      status_[leaving] = BasisStatus::kAtLower;
      x_[leaving] = 0.0;
    }
    status_[q] = BasisStatus::kBasic;
    head_[r] = q;

    const double pivot = alpha[r];
    double* pivot_row = &binv_[r * mm];
    for (int k = 0; k < m_; ++k) pivot_row[k] /= pivot;
    for (int i = 0; i < m_; ++i) {
      if (i == r || alpha[i] == 0.0) continue;
      const double f = alpha[i];
      double* row = &binv_[i * mm];
      for (int k = 0; k < m_; ++k) row[k] -= f * pivot_row[k];
    }
    ++pivots_since_refactor_;

    if (step <= kDegenerateStep && ++degenerate_pivots_ > 3 * static_cast<int64_t>(n_ + m_)) {
      bland_ = true;
    }
  }
}

void SimplexSolver::ExportBasis() {
  saved_basis_.assign(status_.begin(), status_.begin() + n_ + m_);
  for (int i = 0; i < m_; ++i) {
    const int b = head_[i];
    if (!IsArtificial(b)) continue;
    const int logical = n_ + (b - n_ - m_);
    if (saved_basis_[logical] == BasisStatus::kBasic) {
      has_basis_ = false;
      return;
    }
    saved_basis_[logical] = BasisStatus::kBasic;
  }
  has_basis_ = true;
}

LpResult SimplexSolver::Finish(LpStatus status) {
  LpResult result;
  result.status = status;
  result.iterations = iterations_;
  result.phase_one_objective = phase_one_objective_;
  result.warm_started = warm_started_;
  result.x.assign(x_.begin(), x_.begin() + n_);
  if (status == LpStatus::kOptimal) {
    for (int j = 0; j < n_; ++j) {
      // Basic values can sit a rounding error outside their bounds.
      result.x[j] = std::clamp(result.x[j], lower_[j], upper_[j]);
    }
    result.reduced_costs.resize(n_ + m_);
    for (int j = 0; j < n_ + m_; ++j) {
      result.reduced_costs[j] = (j < n_ ? cost_[j] : 0.0) - ColumnDot(j, duals_);
    }
    result.basis.assign(status_.begin(), status_.begin() + n_ + m_);
    result.row_duals = duals_;
    ExportBasis();
  } else {
    has_basis_ = false;
  }
  double objective = 0.0;
  for (int j = 0; j < n_; ++j) objective += cost_[j] * result.x[j];
  result.objective = objective;
  return result;
}

LpResult SimplexSolver::Solve() {
  iterations_ = 0;
  degenerate_pivots_ = 0;
  bland_ = false;
  phase_one_objective_ = 0.0;
  warm_started_ = false;

  for (int j = 0; j < n_; ++j) {
    if (lower_[j] > upper_[j]) return Finish(LpStatus::kInfeasible);
  }
  for (int i = 0; i < m_; ++i) {
    lower_[n_ + i] = base_lower_[n_ + i];
    upper_[n_ + i] = base_upper_[n_ + i];
  }
  double scale = 1.0;
  for (int i = 0; i < m_; ++i) {
    if (std::isfinite(lower_[n_ + i])) scale = std::max(scale, std::abs(lower_[n_ + i]));
    if (std::isfinite(upper_[n_ + i])) scale = std::max(scale, std::abs(upper_[n_ + i]));
  }
  const double infeasible_above = options_.feasibility_tol * scale;

  for (int attempt = 0; attempt < 2; ++attempt) {
    const bool warm = attempt == 0 && options_.warm_start && has_basis_ && TryWarmStart();
    if (warm) {
      warm_started_ = true;
    } else {
      warm_started_ = false;
      ColdStart();
      const IterateOutcome one = Iterate(Phase::kOne);
      if (one == IterateOutcome::kIterationLimit) return Finish(LpStatus::kIterationLimit);
      if (one == IterateOutcome::kSingular) continue;
      phase_one_objective_ = ArtificialSum();
      if (one == IterateOutcome::kUnbounded || phase_one_objective_ > infeasible_above) {
        return Finish(LpStatus::kInfeasible);
      }
      for (int j = n_ + m_; j < num_total(); ++j) {
        lower_[j] = upper_[j] = 0.0;
        if (status_[j] != BasisStatus::kBasic) x_[j] = 0.0;
      }
      bland_ = false;
    }
    const IterateOutcome two = Iterate(Phase::kTwo);
    switch (two) {
      case IterateOutcome::kOptimal: return Finish(LpStatus::kOptimal);
      case IterateOutcome::kUnbounded: return Finish(LpStatus::kUnbounded);
      case IterateOutcome::kIterationLimit: return Finish(LpStatus::kIterationLimit);
      case IterateOutcome::kSingular: break;
    }
  }
  return Finish(LpStatus::kIterationLimit);
}

LpResult SolveLp(const MilpInstance& instance, const LpOptions& options) {
  SimplexSolver solver(instance, options);
  return solver.Solve();
}

}  // namespace osea
