#include "osea/mip.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <queue>
#include <utility>

#include <spdlog/spdlog.h>

namespace osea {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct BoundChange {
  int col;
  double lower;
  double upper;
};

struct Node {
  double bound;
  int64_t id;
  std::vector<BoundChange> changes;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

}  // namespace

Budget Budget::Parse(std::string_view text) {
  constexpr std::string_view kNodes = "nodes";
  if (text.size() > kNodes.size() && text.substr(text.size() - kNodes.size()) == kNodes) {
    const auto digits = text.substr(0, text.size() - kNodes.size());
    int64_t n = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || n <= 0) {
      throw InputError("invalid node budget '" + std::string(text) + "'");
    }
    return Nodes(n);
  }
  double s = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), s);
  if (ec != std::errc() || ptr != text.data() + text.size() || !(s > 0.0)) {
    throw InputError("invalid budget '" + std::string(text) + "', expected seconds or <n>nodes");
  }
  return Seconds(s);
}

std::string Budget::ToString() const {
  std::string out;
  if (has_time_limit()) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", seconds);
    out = buf;
  }
  if (has_node_limit()) {
    if (!out.empty()) out += "+";
    out += std::to_string(nodes) + "nodes";
  }
  return out.empty() ? "unlimited" : out;
}

std::string_view ToString(BnbStatus status) {
  switch (status) {
    case BnbStatus::kOptimal: return "Optimal";
    case BnbStatus::kFeasible: return "Feasible";
    case BnbStatus::kInfeasible: return "Infeasible";
    case BnbStatus::kNoSolutionFound: return "NoSolutionFound";
  }
  return "?";
}

BnbResult SolveMip(const MilpInstance& input, const BnbOptions& options) {
  const auto start = Clock::now();
  if (!(options.limit.seconds > 0.0) || options.limit.nodes <= 0) {
    throw InputError("branch-and-bound limits must be positive");
  }
  const MilpInstance instance = Normalize(input);
  const int n = instance.num_vars();
  const std::vector<int> integers = instance.integer_indices();
  SimplexSolver solver(Relax(instance), options.lp);
  const FeasibilityTolerances tol{1e-6, options.integrality_tol};

  BnbResult result;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  std::optional<Node> dive;
  int64_t next_id = 0;
  double pruned_min = kInfinity;
  double lost_min = kInfinity;
  bool limit_hit = false;
  std::vector<double> lower(n);
  std::vector<double> upper(n);

  auto incumbent_value = [&] { return result.incumbent ? result.incumbent->objective : kInfinity; };
  auto cutoff = [&] {
    const double inc = incumbent_value();
    if (!std::isfinite(inc)) return kInfinity;
    return inc - options.gap_tolerance * std::max(1.0, std::abs(inc));
  };
  auto open_min = [&] {
    double b = std::min(pruned_min, lost_min);
    if (!open.empty()) b = std::min(b, open.top().bound);
    if (dive) b = std::min(b, dive->bound);
    return b;
  };
  auto try_incumbent = [&](std::vector<double> x, double node_bound) {
    for (int j : integers) x[j] = std::round(x[j]);
    Solution candidate = MakeSolution(instance, std::move(x), tol);
    if (candidate.status != SolutionStatus::kFeasible) return;
    if (candidate.objective >= incumbent_value()) return;
    result.incumbent = std::move(candidate);
    const double bound = std::min({open_min(), node_bound, incumbent_value()});
    result.trace.push_back({result.nodes, incumbent_value(), bound});
    spdlog::debug("bnb: incumbent {:.10g} at node {}", incumbent_value(), result.nodes);
  };

  open.push({-kInfinity, next_id++, {}});
  while (dive || !open.empty()) {
    if (result.nodes >= options.limit.nodes || SecondsSince(start) >= options.limit.seconds) {
      limit_hit = true;
      break;
    }
    Node node;
    if (dive) {
      node = std::move(*dive);
      dive.reset();
    } else {
      node = open.top();
      open.pop();
    }
    if (node.bound >= cutoff()) {
      pruned_min = std::min(pruned_min, node.bound);
      continue;
    }
    const bool is_root = result.nodes == 0;
    ++result.nodes;

    std::copy(instance.lower().begin(), instance.lower().end(), lower.begin());
    std::copy(instance.upper().begin(), instance.upper().end(), upper.begin());
    solver.ResetColumnBounds();
    for (const BoundChange& c : node.changes) {
      lower[c.col] = c.lower;
      upper[c.col] = c.upper;
      solver.SetColumnBounds(c.col, c.lower, c.upper);
    }
    const LpResult lp = solver.Solve();
    result.lp_iterations += lp.iterations;

    if (lp.status == LpStatus::kInfeasible) continue;
    if (lp.status != LpStatus::kOptimal) {
      if (is_root && lp.status == LpStatus::kUnbounded) result.root_lp_unbounded = true;
      spdlog::debug("bnb: node LP ended with {}", ToString(lp.status));
      lost_min = std::min(lost_min, node.bound);
      continue;
    }
    const double z = lp.objective;
    if (is_root) result.root_lp_objective = z;
    if (z >= cutoff()) {
      pruned_min = std::min(pruned_min, z);
      continue;
    }

    int branch = -1;
    double best_distance = options.integrality_tol;
    for (int j : integers) {
      const double f = lp.x[j] - std::floor(lp.x[j]);
      const double distance = std::min(f, 1.0 - f);
      if (distance > best_distance) {
        best_distance = distance;
        branch = j;
      }
    }
    if (branch < 0) {
      try_incumbent(lp.x, z);
      continue;
    }
    if (is_root && options.root_rounding) try_incumbent(lp.x, z);
    if (z >= cutoff()) {
      pruned_min = std::min(pruned_min, z);
      continue;
    }

    const double value = lp.x[branch];
    Node down{z, next_id++, node.changes};
    down.changes.push_back({branch, lower[branch], std::floor(value)});
    Node up{z, next_id++, std::move(node.changes)};
    up.changes.push_back({branch, std::ceil(value), upper[branch]});
    if (!result.incumbent) {
      // Plunge until the first incumbent, following the rounding direction.
      const bool prefer_up = value - std::floor(value) >= 0.5;
      dive = prefer_up ? std::move(up) : std::move(down);
      open.push(prefer_up ? std::move(down) : std::move(up));
    } else {
      open.push(std::move(down));
      open.push(std::move(up));
    }
  }

  const bool exhausted = !limit_hit && !std::isfinite(lost_min) && !result.root_lp_unbounded;
  if (exhausted) {
    result.status = result.incumbent ? BnbStatus::kOptimal : BnbStatus::kInfeasible;
    result.bound = std::min(incumbent_value(), pruned_min);
  } else {
    result.status = result.incumbent ? BnbStatus::kFeasible : BnbStatus::kNoSolutionFound;
    result.bound = result.root_lp_unbounded ? -kInfinity : std::min(open_min(), incumbent_value());
  }
  result.wall_time = SecondsSince(start);
  return result;
}

IncumbentSearch FindIncumbent(const MilpInstance& instance, const Budget& budget,
                              const LpOptions& lp) {
  BnbOptions options;
  options.limit = budget;
  options.lp = lp;
  const BnbResult r = SolveMip(instance, options);
  IncumbentSearch out;
  out.incumbent = r.incumbent;
  out.proven_infeasible = r.status == BnbStatus::kInfeasible;
  out.nodes = r.nodes;
  out.lp_iterations = r.lp_iterations;
  out.wall_time = r.wall_time;
  return out;
}

}  // namespace osea
