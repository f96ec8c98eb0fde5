// Canonical MILP data model: instance storage, objective evaluation,
// feasibility checking, normalization, classification and fixing.

#ifndef OSEA_MODEL_H_
#define OSEA_MODEL_H_

#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace osea {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Thrown for structurally invalid inputs (bad indices, NaNs, bound order...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Vector lengths that do not match the instance dimensions.
class DimensionError : public InputError {
 public:
  using InputError::InputError;
};

// An operation was called outside its documented precondition.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class VarKind { kBinary, kInteger, kContinuous };
enum class ObjectiveSense { kMinimize, kMaximize };
enum class ProblemClass { kLp, kBp, kMbp, kPureInteger, kMilp };

std::string_view ToString(VarKind kind);
std::string_view ToString(ProblemClass cls);

// Activity constraint of one row. Range rows keep their lower end in `rhs`
// and a nonnegative width in `range`, so low = rhs and high = rhs + range.
struct RowConstraint {
  enum class Sense { kGreaterEqual, kLessEqual, kEqual, kRange };

  Sense sense = Sense::kGreaterEqual;
  double rhs = 0.0;
  double range = 0.0;

  double lower() const;
  double upper() const;

  static RowConstraint GreaterEqual(double b) { return {Sense::kGreaterEqual, b, 0.0}; }
  static RowConstraint LessEqual(double b) { return {Sense::kLessEqual, b, 0.0}; }
  static RowConstraint Equal(double b) { return {Sense::kEqual, b, 0.0}; }
  static RowConstraint Range(double low, double width) { return {Sense::kRange, low, width}; }

  bool operator==(const RowConstraint&) const = default;
};

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;

  bool operator==(const Triplet&) const = default;
};

// Plain field bag used to build instances. `entries` may be given in any
// order; names may be left empty and get generated as C<j> / R<i>.
struct MilpData {
  std::string name;
  ObjectiveSense sense = ObjectiveSense::kMinimize;
  // Set by Normalize() when a maximization problem was negated.
  bool sense_flipped = false;
  std::string objective_name = "obj";
  double objective_offset = 0.0;
  std::vector<double> cost;
  std::vector<Triplet> entries;
  std::vector<RowConstraint> rows;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<VarKind> kinds;
  std::vector<std::string> col_names;
  std::vector<std::string> row_names;

  bool operator==(const MilpData&) const = default;
};

// Immutable, validated MILP. The constructor sorts entries row-major and
// rejects any violation of the model invariants with InputError.
class MilpInstance {
 public:
  MilpInstance();
  explicit MilpInstance(MilpData data);

  const MilpData& data() const { return data_; }
  const std::string& name() const { return data_.name; }
  ObjectiveSense sense() const { return data_.sense; }
  int num_vars() const { return static_cast<int>(data_.cost.size()); }
  int num_rows() const { return static_cast<int>(data_.rows.size()); }
  int num_entries() const { return static_cast<int>(data_.entries.size()); }

  std::span<const double> cost() const { return data_.cost; }
  std::span<const double> lower() const { return data_.lower; }
  std::span<const double> upper() const { return data_.upper; }
  std::span<const VarKind> kinds() const { return data_.kinds; }
  std::span<const RowConstraint> rows() const { return data_.rows; }
  std::span<const Triplet> entries() const { return data_.entries; }
  std::span<const Triplet> row_entries(int row) const;

  bool is_integer(int j) const { return data_.kinds[j] != VarKind::kContinuous; }
  // Indices of binary and general integer variables, ascending.
  std::vector<int> integer_indices() const;
  int count(VarKind kind) const;

  // -1 when objective values must be negated to reach the user's
  // orientation, +1 otherwise.
  double user_sign() const;

  bool operator==(const MilpInstance& other) const { return data_ == other.data_; }

 private:
  MilpData data_;
  std::vector<int> row_start_;
};

enum class SolutionStatus {
  kFeasible,
  kIntegerInfeasible,
  kConstraintInfeasible,
  kUnknown
};

std::string_view ToString(SolutionStatus status);

struct Solution {
  std::vector<double> x;
  // c.x in minimization orientation, without the objective offset.
  double objective = 0.0;
  SolutionStatus status = SolutionStatus::kUnknown;
};

struct FeasibilityTolerances {
  double constraint = 1e-6;
  double integrality = 1e-6;
};

struct Violation {
  enum class Kind { kRow, kLowerBound, kUpperBound, kIntegrality };
  Kind kind;
  int index;
  double amount;
};

struct FeasibilityReport {
  SolutionStatus status = SolutionStatus::kUnknown;
  std::vector<Violation> violations;
};

// c.x, negated for maximization problems.
double EvaluateObjective(const MilpInstance& instance, std::span<const double> x);

// Row and bound violations take precedence over integrality violations.
FeasibilityReport CheckFeasibility(const MilpInstance& instance,
                                   std::span<const double> x,
                                   const FeasibilityTolerances& tol = {});

// Builds a Solution with objective and status filled in.
Solution MakeSolution(const MilpInstance& instance, std::vector<double> x,
                      const FeasibilityTolerances& tol = {});

// Objective as the user would read it: original orientation plus offset.
double ReportedObjective(const MilpInstance& instance, double min_objective);

MilpInstance Normalize(const MilpInstance& instance);

ProblemClass Classify(const MilpInstance& instance);

// Pins lower = upper = 0 for every index in `fix_set`. Each index must be an
// integer variable whose bounds contain zero.
MilpInstance FixVariablesToZero(const MilpInstance& instance,
                                std::span<const int> fix_set);

}  // namespace osea

#endif  // OSEA_MODEL_H_
