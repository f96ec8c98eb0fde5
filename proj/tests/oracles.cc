#include "oracles.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace osea::testing {
namespace {

struct Hyperplane {
  std::vector<double> a;
  double b;
};

// Dense LP over `p` columns: min c.y, row_lo <= A y <= row_hi, lo <= y <= hi.
struct DenseLp {
  int p = 0;
  std::vector<double> c;
  std::vector<std::vector<double>> a;
  std::vector<double> row_lo, row_hi, lo, hi;
};

bool SolveSquare(std::vector<std::vector<double>> m, std::vector<double> rhs,
                 std::vector<double>& y) {
  const int p = static_cast<int>(rhs.size());
  for (int col = 0; col < p; ++col) {
    int piv = col;
    for (int r = col + 1; r < p; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    }
    if (std::abs(m[piv][col]) < 1e-9) return false;
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (int r = col + 1; r < p; ++r) {
      const double f = m[r][col] / m[col][col];
      if (f == 0.0) continue;
      for (int k = col; k < p; ++k) m[r][k] -= f * m[col][k];
      rhs[r] -= f * rhs[col];
    }
  }
  y.assign(p, 0.0);
  for (int r = p - 1; r >= 0; --r) {
    double s = rhs[r];
    for (int k = r + 1; k < p; ++k) s -= m[r][k] * y[k];
    y[r] = s / m[r][r];
  }
  return true;
}

bool DenseFeasible(const DenseLp& lp, const std::vector<double>& y) {
  constexpr double kTol = 1e-7;
  for (int k = 0; k < lp.p; ++k) {
    if (y[k] < lp.lo[k] - kTol * (1 + std::abs(lp.lo[k]))) return false;
    if (y[k] > lp.hi[k] + kTol * (1 + std::abs(lp.hi[k]))) return false;
  }
  for (size_t i = 0; i < lp.a.size(); ++i) {
    double act = 0.0;
    for (int k = 0; k < lp.p; ++k) act += lp.a[i][k] * y[k];
    if (act < lp.row_lo[i] - kTol * (1 + std::abs(lp.row_lo[i]))) return false;
    if (act > lp.row_hi[i] + kTol * (1 + std::abs(lp.row_hi[i]))) return false;
  }
  return true;
}

OracleOptimum SolveDenseByVertices(const DenseLp& lp) {
  OracleOptimum best;
  if (lp.p == 0) {
    if (DenseFeasible(lp, {})) best.feasible = true;
    return best;
  }
  std::vector<Hyperplane> planes;
  for (size_t i = 0; i < lp.a.size(); ++i) {
    if (std::isfinite(lp.row_lo[i])) planes.push_back({lp.a[i], lp.row_lo[i]});
    if (std::isfinite(lp.row_hi[i]) && lp.row_hi[i] != lp.row_lo[i]) {
      planes.push_back({lp.a[i], lp.row_hi[i]});
    }
  }
  for (int k = 0; k < lp.p; ++k) {
    std::vector<double> e(lp.p, 0.0);
    e[k] = 1.0;
    if (!std::isfinite(lp.lo[k]) || !std::isfinite(lp.hi[k])) {
      throw std::invalid_argument("vertex oracle needs finite bounds");
    }
    planes.push_back({e, lp.lo[k]});
    if (lp.hi[k] != lp.lo[k]) planes.push_back({e, lp.hi[k]});
  }
  const int total = static_cast<int>(planes.size());
  std::vector<int> pick(lp.p);
  for (int k = 0; k < lp.p; ++k) pick[k] = k;
  std::vector<double> y;
  while (true) {
    std::vector<std::vector<double>> m(lp.p);
    std::vector<double> rhs(lp.p);
    for (int k = 0; k < lp.p; ++k) {
      m[k] = planes[pick[k]].a;
      rhs[k] = planes[pick[k]].b;
    }
    if (SolveSquare(m, rhs, y) && DenseFeasible(lp, y)) {
      double obj = 0.0;
      for (int k = 0; k < lp.p; ++k) obj += lp.c[k] * y[k];
      if (!best.feasible || obj < best.objective) {
        best.feasible = true;
        best.objective = obj;
        best.x = y;
      }
    }
    // Next combination in lexicographic order.
    int k = lp.p - 1;
    while (k >= 0 && pick[k] == total - lp.p + k) --k;
    if (k < 0) break;
    ++pick[k];
    for (int r = k + 1; r < lp.p; ++r) pick[r] = pick[r - 1] + 1;
  }
  return best;
}

double Sign(const MilpData& data) {
  return data.sense == ObjectiveSense::kMaximize ? -1.0 : 1.0;
}

// Continuous-only subproblem with the columns in `fixed` held at the given
// values.
DenseLp Restrict(const MilpData& data, const std::vector<int>& free_cols,
                 const std::vector<double>& fixed_x) {
  const int n = static_cast<int>(data.cost.size());
  std::vector<int> pos(n, -1);
  for (size_t k = 0; k < free_cols.size(); ++k) pos[free_cols[k]] = static_cast<int>(k);
  DenseLp lp;
  lp.p = static_cast<int>(free_cols.size());
  for (int j : free_cols) {
    lp.c.push_back(Sign(data) * data.cost[j]);
    lp.lo.push_back(data.lower[j]);
    lp.hi.push_back(data.upper[j]);
  }
  const int m = static_cast<int>(data.rows.size());
  lp.a.assign(m, std::vector<double>(lp.p, 0.0));
  std::vector<double> shift(m, 0.0);
  for (const Triplet& t : data.entries) {
    if (pos[t.col] >= 0) {
      lp.a[t.row][pos[t.col]] += t.value;
    } else {
      shift[t.row] += t.value * fixed_x[t.col];
    }
  }
  for (int i = 0; i < m; ++i) {
    lp.row_lo.push_back(data.rows[i].lower() - shift[i]);
    lp.row_hi.push_back(data.rows[i].upper() - shift[i]);
  }
  return lp;
}

}  // namespace

bool OracleFeasible(const MilpData& data, std::span<const double> x, double tol) {
  const size_t n = data.cost.size();
  if (x.size() != n) return false;
  for (size_t j = 0; j < n; ++j) {
    if (!std::isfinite(x[j])) return false;
    if (x[j] < data.lower[j] - tol || x[j] > data.upper[j] + tol) return false;
    if (data.kinds[j] != VarKind::kContinuous && std::abs(x[j] - std::round(x[j])) > tol) {
      return false;
    }
  }
  std::vector<double> act(data.rows.size(), 0.0);
  for (const Triplet& t : data.entries) act[t.row] += t.value * x[t.col];
  for (size_t i = 0; i < data.rows.size(); ++i) {
    const RowConstraint& r = data.rows[i];
    double lo = -kInfinity, hi = kInfinity;
    switch (r.sense) {
      case RowConstraint::Sense::kGreaterEqual: lo = r.rhs; break;
      case RowConstraint::Sense::kLessEqual: hi = r.rhs; break;
      case RowConstraint::Sense::kEqual: lo = hi = r.rhs; break;
      case RowConstraint::Sense::kRange: lo = r.rhs; hi = r.rhs + r.range; break;
    }
    if (act[i] < lo - tol * std::max(1.0, std::abs(lo))) return false;
    if (act[i] > hi + tol * std::max(1.0, std::abs(hi))) return false;
  }
  return true;
}

double OracleMinObjective(const MilpData& data, std::span<const double> x) {
  double s = 0.0;
  for (size_t j = 0; j < data.cost.size(); ++j) s += data.cost[j] * x[j];
  return Sign(data) * s;
}

OracleOptimum EnumerateIntegerBox(const MilpData& data) {
  const int n = static_cast<int>(data.cost.size());
  std::vector<double> x(n);
  for (int j = 0; j < n; ++j) {
    if (data.kinds[j] == VarKind::kContinuous) {
      throw std::invalid_argument("integer box oracle needs integer columns only");
    }
    if (!std::isfinite(data.lower[j]) || !std::isfinite(data.upper[j])) {
      throw std::invalid_argument("integer box oracle needs finite bounds");
    }
    x[j] = std::ceil(data.lower[j]);
  }
  OracleOptimum best;
  while (true) {
    if (OracleFeasible(data, x, 1e-9)) {
      const double obj = OracleMinObjective(data, x);
      if (!best.feasible || obj < best.objective) {
        best = {true, obj, x};
      }
    }
    int j = 0;
    while (j < n && x[j] + 1 > data.upper[j]) {
      x[j] = std::ceil(data.lower[j]);
      ++j;
    }
    if (j == n) break;
    x[j] += 1;
  }
  return best;
}

OracleOptimum EnumerateVertices(const MilpData& data) {
  const int n = static_cast<int>(data.cost.size());
  std::vector<int> all(n);
  for (int j = 0; j < n; ++j) all[j] = j;
  return SolveDenseByVertices(Restrict(data, all, std::vector<double>(n, 0.0)));
}

OracleOptimum EnumerateMixed(const MilpData& data) {
  const int n = static_cast<int>(data.cost.size());
  std::vector<int> ints, conts;
  for (int j = 0; j < n; ++j) {
    (data.kinds[j] == VarKind::kContinuous ? conts : ints).push_back(j);
  }
  std::vector<double> x(n, 0.0);
  for (int j : ints) x[j] = std::ceil(data.lower[j]);
  OracleOptimum best;
  while (true) {
    const OracleOptimum sub = SolveDenseByVertices(Restrict(data, conts, x));
    if (sub.feasible) {
      double obj = sub.objective;
      for (int j : ints) obj += Sign(data) * data.cost[j] * x[j];
      if (!best.feasible || obj < best.objective) {
        best.feasible = true;
        best.objective = obj;
        best.x = x;
        for (size_t k = 0; k < conts.size(); ++k) best.x[conts[k]] = sub.x[k];
      }
    }
    size_t k = 0;
    while (k < ints.size() && x[ints[k]] + 1 > data.upper[ints[k]]) {
      x[ints[k]] = std::ceil(data.lower[ints[k]]);
      ++k;
    }
    if (k == ints.size()) break;
    x[ints[k]] += 1;
  }
  return best;
}

std::vector<int> ColumnScanFixSet(const MilpData& data,
                                  const std::vector<std::vector<double>>& members, double tol) {
  std::vector<int> out;
  for (size_t j = 0; j < data.cost.size(); ++j) {
    if (data.kinds[j] == VarKind::kContinuous) continue;
    if (data.lower[j] > 0 || data.upper[j] < 0) continue;
    bool zero_everywhere = true;
    for (const auto& x : members) {
      if (std::abs(x[j]) > tol) zero_everywhere = false;
    }
    if (zero_everywhere) out.push_back(static_cast<int>(j));
  }
  return out;
}

std::vector<double> CountingProfile(const std::vector<double>& ratios,
                                    const std::vector<double>& taus) {
  std::vector<double> rho;
  for (double tau : taus) {
    int count = 0;
    for (double r : ratios) {
      if (r <= tau) ++count;
    }
    rho.push_back(static_cast<double>(count) / static_cast<double>(ratios.size()));
  }
  return rho;
}

}  // namespace osea::testing
