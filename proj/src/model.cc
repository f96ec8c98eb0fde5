#include "osea/model.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace osea {
namespace {

std::string Describe(const char* what, int index) {
  return std::string(what) + " " + std::to_string(index);
}

void CheckLength(std::span<const double> x, int n) {
  if (static_cast<int>(x.size()) != n) {
    throw DimensionError("vector length " + std::to_string(x.size()) +
                         " does not match " + std::to_string(n) + " variables");
  }
}

}  // namespace

std::string_view ToString(VarKind kind) {
  switch (kind) {
    case VarKind::kBinary: return "binary";
    case VarKind::kInteger: return "integer";
    case VarKind::kContinuous: return "continuous";
  }
  return "?";
}

std::string_view ToString(ProblemClass cls) {
  switch (cls) {
    case ProblemClass::kLp: return "LP";
    case ProblemClass::kBp: return "BP";
    case ProblemClass::kMbp: return "MBP";
    case ProblemClass::kPureInteger: return "IP";
    case ProblemClass::kMilp: return "MILP";
  }
  return "?";
}

std::string_view ToString(SolutionStatus status) {
  switch (status) {
    case SolutionStatus::kFeasible: return "Feasible";
    case SolutionStatus::kIntegerInfeasible: return "IntegerInfeasible";
    case SolutionStatus::kConstraintInfeasible: return "ConstraintInfeasible";
    case SolutionStatus::kUnknown: return "Unknown";
  }
  return "?";
}

double RowConstraint::lower() const {
  switch (sense) {
    case Sense::kGreaterEqual:
    case Sense::kEqual:
    case Sense::kRange:
      return rhs;
    case Sense::kLessEqual:
      return -kInfinity;
  }
  return -kInfinity;
}

double RowConstraint::upper() const {
  switch (sense) {
    case Sense::kLessEqual:
    case Sense::kEqual:
      return rhs;
    case Sense::kRange:
      return rhs + range;
    case Sense::kGreaterEqual:
      return kInfinity;
  }
  return kInfinity;
}

MilpInstance::MilpInstance() : row_start_(1, 0) {}

MilpInstance::MilpInstance(MilpData data) : data_(std::move(data)) {
  const int n = static_cast<int>(data_.cost.size());
  const int m = static_cast<int>(data_.rows.size());
  if (static_cast<int>(data_.lower.size()) != n ||
      static_cast<int>(data_.upper.size()) != n ||
      static_cast<int>(data_.kinds.size()) != n) {
    throw DimensionError("cost, bounds and kinds must all have length n");
  }
  if (data_.col_names.empty()) {
    data_.col_names.reserve(n);
    for (int j = 0; j < n; ++j) data_.col_names.push_back("C" + std::to_string(j));
  }
  if (data_.row_names.empty()) {
    data_.row_names.reserve(m);
    for (int i = 0; i < m; ++i) data_.row_names.push_back("R" + std::to_string(i));
  }
  if (static_cast<int>(data_.col_names.size()) != n ||
      static_cast<int>(data_.row_names.size()) != m) {
    throw DimensionError("name lists must match the instance dimensions");
  }
  if (!std::isfinite(data_.objective_offset)) {
    throw InputError("objective offset must be finite");
  }

  for (int j = 0; j < n; ++j) {
    const double lo = data_.lower[j];
    const double up = data_.upper[j];
    if (!std::isfinite(data_.cost[j])) throw InputError(Describe("non-finite cost on column", j));
    if (std::isnan(lo) || std::isnan(up)) throw InputError(Describe("NaN bound on column", j));
    if (lo == kInfinity || up == -kInfinity) {
      throw InputError(Describe("bound at the wrong infinity on column", j));
    }
    if (lo > up) throw InputError(Describe("lower bound exceeds upper bound on column", j));
    if (data_.kinds[j] == VarKind::kBinary && (lo < 0.0 || up > 1.0)) {
      throw InputError(Describe("binary bounds outside [0, 1] on column", j));
    }
  }
  for (int i = 0; i < m; ++i) {
    const RowConstraint& row = data_.rows[i];
    if (!std::isfinite(row.rhs) || !std::isfinite(row.range)) {
      throw InputError(Describe("non-finite right-hand side on row", i));
    }
    if (row.sense == RowConstraint::Sense::kRange && row.range < 0.0) {
      throw InputError(Describe("negative range width on row", i));
    }
  }

  std::sort(data_.entries.begin(), data_.entries.end(),
            [](const Triplet& a, const Triplet& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
  row_start_.assign(m + 1, 0);
  for (size_t k = 0; k < data_.entries.size(); ++k) {
    const Triplet& t = data_.entries[k];
    if (t.row < 0 || t.row >= m || t.col < 0 || t.col >= n) {
      throw InputError("matrix entry (" + std::to_string(t.row) + ", " +
                       std::to_string(t.col) + ") out of range");
    }
    if (!std::isfinite(t.value)) {
      throw InputError("non-finite matrix entry in row " + std::to_string(t.row));
    }
    if (k > 0 && data_.entries[k - 1].row == t.row && data_.entries[k - 1].col == t.col) {
      throw InputError("duplicate matrix entry (" + std::to_string(t.row) + ", " +
                       std::to_string(t.col) + ")");
    }
    ++row_start_[t.row + 1];
  }
  for (int i = 0; i < m; ++i) row_start_[i + 1] += row_start_[i];
}

std::span<const Triplet> MilpInstance::row_entries(int row) const {
  return std::span<const Triplet>(data_.entries)
      .subspan(row_start_[row], row_start_[row + 1] - row_start_[row]);
}

std::vector<int> MilpInstance::integer_indices() const {
  std::vector<int> out;
  for (int j = 0; j < num_vars(); ++j) {
    if (is_integer(j)) out.push_back(j);
  }
  return out;
}

int MilpInstance::count(VarKind kind) const {
  return static_cast<int>(std::count(data_.kinds.begin(), data_.kinds.end(), kind));
}

double MilpInstance::user_sign() const {
  const bool negate = (data_.sense == ObjectiveSense::kMaximize) != data_.sense_flipped;
  return negate ? -1.0 : 1.0;
}

double EvaluateObjective(const MilpInstance& instance, std::span<const double> x) {
  CheckLength(x, instance.num_vars());
  double total = 0.0;
  const auto cost = instance.cost();
  for (size_t j = 0; j < x.size(); ++j) total += cost[j] * x[j];
  return instance.sense() == ObjectiveSense::kMaximize ? -total : total;
}

FeasibilityReport CheckFeasibility(const MilpInstance& instance,
                                   std::span<const double> x,
                                   const FeasibilityTolerances& tol) {
  CheckLength(x, instance.num_vars());
  FeasibilityReport report;
  for (int j = 0; j < instance.num_vars(); ++j) {
    if (std::isnan(x[j])) {
      report.violations.push_back({Violation::Kind::kLowerBound, j, kInfinity});
    } else if (x[j] < instance.lower()[j] - tol.constraint) {
      report.violations.push_back({Violation::Kind::kLowerBound, j, instance.lower()[j] - x[j]});
    } else if (x[j] > instance.upper()[j] + tol.constraint) {
      report.violations.push_back({Violation::Kind::kUpperBound, j, x[j] - instance.upper()[j]});
    }
  }
  for (int i = 0; i < instance.num_rows(); ++i) {
    double activity = 0.0;
    for (const Triplet& t : instance.row_entries(i)) activity += t.value * x[t.col];
    const RowConstraint& row = instance.rows()[i];
    const double below = row.lower() - activity;
    const double above = activity - row.upper();
    if (below > tol.constraint) {
      report.violations.push_back({Violation::Kind::kRow, i, below});
    } else if (above > tol.constraint) {
      report.violations.push_back({Violation::Kind::kRow, i, above});
    }
  }
  const bool constraint_violated = !report.violations.empty();
  for (int j = 0; j < instance.num_vars(); ++j) {
    if (!instance.is_integer(j)) continue;
    const double frac = std::abs(x[j] - std::round(x[j]));
    if (frac > tol.integrality) {
      report.violations.push_back({Violation::Kind::kIntegrality, j, frac});
    }
  }
  if (constraint_violated) {
    report.status = SolutionStatus::kConstraintInfeasible;
  } else if (!report.violations.empty()) {
    report.status = SolutionStatus::kIntegerInfeasible;
  } else {
    report.status = SolutionStatus::kFeasible;
  }
  return report;
}

Solution MakeSolution(const MilpInstance& instance, std::vector<double> x,
                      const FeasibilityTolerances& tol) {
  Solution s;
  s.status = CheckFeasibility(instance, x, tol).status;
  s.objective = EvaluateObjective(instance, x);
  s.x = std::move(x);
  return s;
}

double ReportedObjective(const MilpInstance& instance, double min_objective) {
  return instance.user_sign() * min_objective + instance.data().objective_offset;
}

MilpInstance Normalize(const MilpInstance& instance) {
  if (instance.sense() == ObjectiveSense::kMinimize) return instance;
  MilpData data = instance.data();
  for (double& c : data.cost) c = -c;
  data.sense = ObjectiveSense::kMinimize;
  data.sense_flipped = !data.sense_flipped;
  return MilpInstance(std::move(data));
}

ProblemClass Classify(const MilpInstance& instance) {
  const int binaries = instance.count(VarKind::kBinary);
  const int integers = instance.count(VarKind::kInteger);
  const int continuous = instance.count(VarKind::kContinuous);
  if (binaries + integers == 0) return ProblemClass::kLp;
  if (integers == 0 && continuous == 0) return ProblemClass::kBp;
  if (integers == 0) return ProblemClass::kMbp;
  if (continuous == 0) return ProblemClass::kPureInteger;
  return ProblemClass::kMilp;
}

MilpInstance FixVariablesToZero(const MilpInstance& instance,
                                std::span<const int> fix_set) {
  if (fix_set.empty()) return instance;
  MilpData data = instance.data();
  for (int j : fix_set) {
    if (j < 0 || j >= instance.num_vars()) {
      throw PreconditionError(Describe("fix index out of range:", j));
    }
    if (!instance.is_integer(j)) {
      throw PreconditionError(Describe("cannot fix continuous column", j));
    }
    if (data.lower[j] > 0.0 || data.upper[j] < 0.0) {
      throw PreconditionError(Describe("bounds exclude zero on column", j));
    }
    data.lower[j] = 0.0;
    data.upper[j] = 0.0;
  }
  return MilpInstance(std::move(data));
}

}  // namespace osea
