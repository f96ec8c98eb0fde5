#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <string>
#include <utility>

#include "osea/bench.h"

namespace osea {
namespace {

// Draws straight from the engine so sequences do not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  Rng(uint64_t seed, int index) {
    std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                      static_cast<uint32_t>(index)};
    engine_.seed(seq);
  }

  // Uniform integer in [lo, hi].
  int Int(int lo, int hi) {
    const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
  }

  // Uniform in [0, 1).
  double Unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool Chance(double p) { return Unit() < p; }

 private:
  std::mt19937_64 engine_;
};

constexpr double kSupportChance = 0.35;

std::vector<VarKind> DrawKinds(Rng& rng, ProblemClass cls, int n, double integer_fraction) {
  std::vector<VarKind> kinds(n, VarKind::kContinuous);
  auto integer_kind = [&] { return rng.Chance(0.5) ? VarKind::kInteger : VarKind::kBinary; };
  switch (cls) {
    case ProblemClass::kLp:
      break;
    case ProblemClass::kBp:
      std::fill(kinds.begin(), kinds.end(), VarKind::kBinary);
      break;
    case ProblemClass::kMbp:
      for (auto& k : kinds) k = rng.Chance(integer_fraction) ? VarKind::kBinary : VarKind::kContinuous;
      kinds[0] = VarKind::kBinary;
      if (n > 1) kinds[n - 1] = VarKind::kContinuous;
      break;
    case ProblemClass::kPureInteger:
      for (auto& k : kinds) k = integer_kind();
      kinds[0] = VarKind::kInteger;
      break;
    case ProblemClass::kMilp:
      for (auto& k : kinds) k = rng.Chance(integer_fraction) ? integer_kind() : VarKind::kContinuous;
      kinds[0] = VarKind::kInteger;
      if (n > 1) kinds[n - 1] = VarKind::kContinuous;
      break;
  }
  return kinds;
}

GeneratedInstance GenerateOne(uint64_t seed, int index, const GeneratorSpec& spec) {
  Rng rng(seed, index);
  const ProblemClass cls = spec.classes[index % spec.classes.size()];
  const int n = rng.Int(spec.n_min, spec.n_max);
  const int m = rng.Int(spec.m_min, spec.m_max);

  MilpData data;
  data.name = "gen" + std::to_string(seed) + "_" + std::to_string(index);
  data.kinds = DrawKinds(rng, cls, n, spec.integer_fraction);
  data.lower.resize(n);
  data.upper.resize(n);
  data.cost.resize(n);
  std::vector<double> point(n, 0.0);
  for (int j = 0; j < n; ++j) {
    switch (data.kinds[j]) {
      case VarKind::kBinary:
        data.upper[j] = 1.0;
        break;
      case VarKind::kInteger:
        // A [0, 1] integer column is a binary one; MPS readers see it that way.
        data.upper[j] = rng.Int(std::min(2, spec.integer_upper_max), spec.integer_upper_max);
        if (data.upper[j] == 1.0) data.kinds[j] = VarKind::kBinary;
        break;
      case VarKind::kContinuous:
        data.lower[j] = rng.Int(spec.continuous_lower_min, 0);
        data.upper[j] = rng.Int(1, spec.continuous_upper_max);
        break;
    }
    data.cost[j] = rng.Int(spec.cost_min, spec.cost_max);
    if (!rng.Chance(kSupportChance)) continue;
    if (data.kinds[j] == VarKind::kContinuous) {
      // Quarter steps keep row activities exact in binary floating point.
      point[j] = rng.Int(static_cast<int>(4 * data.lower[j]), static_cast<int>(4 * data.upper[j])) / 4.0;
    } else {
      point[j] = rng.Int(1, static_cast<int>(data.upper[j]));
    }
  }

  for (int i = 0; i < m; ++i) {
    const double draw = rng.Unit();
    const RowConstraint::Sense sense = draw < 0.55   ? RowConstraint::Sense::kGreaterEqual
                                       : draw < 0.90 ? RowConstraint::Sense::kLessEqual
                                                     : RowConstraint::Sense::kEqual;
    double activity = 0.0;
    bool any = false;
    for (int j = 0; j < n; ++j) {
      if (!rng.Chance(spec.density)) continue;
      int a = rng.Int(1, spec.coef_max);
      if (sense != RowConstraint::Sense::kGreaterEqual && rng.Chance(0.3)) a = -a;
      data.entries.push_back({i, j, static_cast<double>(a)});
      activity += a * point[j];
      any = true;
    }
    if (!any) {
      const int j = rng.Int(0, n - 1);
      data.entries.push_back({i, j, 1.0});
      activity += point[j];
    }
    double rhs = activity;
    const int slack = rng.Int(0, spec.coef_max);
    switch (sense) {
      case RowConstraint::Sense::kGreaterEqual:
        rhs = spec.guaranteed_feasible ? activity - rng.Int(0, slack / 2) : activity + slack;
        data.rows.push_back(RowConstraint::GreaterEqual(rhs));
        break;
      case RowConstraint::Sense::kLessEqual:
        rhs = spec.guaranteed_feasible ? activity + slack : activity - slack;
        data.rows.push_back(RowConstraint::LessEqual(rhs));
        break;
      default:
        if (!spec.guaranteed_feasible) rhs += rng.Int(0, 1);
        data.rows.push_back(RowConstraint::Equal(rhs));
        break;
    }
  }

  GeneratedInstance out{MilpInstance(std::move(data)), std::nullopt};
  if (spec.guaranteed_feasible) out.certificate = std::move(point);
  return out;
}

int ParseInt(std::string_view key, std::string_view text) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InputError("generator spec: bad integer for " + std::string(key) + ": '" +
                     std::string(text) + "'");
  }
  return v;
}

double ParseReal(std::string_view key, std::string_view text) {
  try {
    size_t used = 0;
    const std::string s(text);
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw InputError("generator spec: bad number for " + std::string(key) + ": '" +
                   std::string(text) + "'");
}

std::pair<int, int> ParseRange(std::string_view key, std::string_view text) {
  const size_t dots = text.find("..");
  if (dots == std::string_view::npos) {
    const int v = ParseInt(key, text);
    return {v, v};
  }
  return {ParseInt(key, text.substr(0, dots)), ParseInt(key, text.substr(dots + 2))};
}

ProblemClass ParseClass(std::string_view text) {
  for (ProblemClass c : {ProblemClass::kLp, ProblemClass::kBp, ProblemClass::kMbp,
                         ProblemClass::kPureInteger, ProblemClass::kMilp}) {
    if (ToString(c) == text) return c;
  }
  if (text == "PureInteger") return ProblemClass::kPureInteger;
  throw InputError("generator spec: unknown class '" + std::string(text) + "'");
}

void Validate(const GeneratorSpec& spec) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw InputError(std::string("generator spec: ") + what);
  };
  require(spec.count >= 0, "count must be nonnegative");
  require(spec.n_min >= 1 && spec.n_min <= spec.n_max, "n range must satisfy 1 <= lo <= hi");
  require(spec.m_min >= 1 && spec.m_min <= spec.m_max, "m range must satisfy 1 <= lo <= hi");
  require(spec.integer_fraction >= 0.0 && spec.integer_fraction <= 1.0, "int must lie in [0,1]");
  require(spec.density > 0.0 && spec.density <= 1.0, "density must lie in (0,1]");
  require(spec.cost_min <= spec.cost_max, "cost range is empty");
  require(spec.coef_max >= 1, "coef must be at least 1");
  require(spec.integer_upper_max >= 1, "ub must be at least 1");
  require(spec.continuous_upper_max >= 1, "cub must be at least 1");
  require(spec.continuous_lower_min <= 0, "clb must not be positive");
  require(!spec.classes.empty(), "classes must not be empty");
}

}  // namespace

GeneratorSpec ParseGeneratorSpec(std::string_view text) {
  GeneratorSpec spec;
  while (!text.empty()) {
    const size_t comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view() : text.substr(comma + 1);
    if (item.empty()) continue;
    const size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw InputError("generator spec: expected key=value, got '" + std::string(item) + "'");
    }
    const std::string_view key = item.substr(0, eq);
    const std::string_view value = item.substr(eq + 1);
    if (key == "count") {
      spec.count = ParseInt(key, value);
    } else if (key == "n") {
      std::tie(spec.n_min, spec.n_max) = ParseRange(key, value);
    } else if (key == "m") {
      std::tie(spec.m_min, spec.m_max) = ParseRange(key, value);
    } else if (key == "int") {
      spec.integer_fraction = ParseReal(key, value);
    } else if (key == "density") {
      spec.density = ParseReal(key, value);
    } else if (key == "cost") {
      std::tie(spec.cost_min, spec.cost_max) = ParseRange(key, value);
    } else if (key == "coef") {
      spec.coef_max = ParseInt(key, value);
    } else if (key == "ub") {
      spec.integer_upper_max = ParseInt(key, value);
    } else if (key == "cub") {
      spec.continuous_upper_max = ParseInt(key, value);
    } else if (key == "clb") {
      spec.continuous_lower_min = ParseInt(key, value);
    } else if (key == "feasible") {
      spec.guaranteed_feasible = ParseInt(key, value) != 0;
    } else if (key == "classes") {
      spec.classes.clear();
      std::string_view rest = value;
      while (!rest.empty()) {
        const size_t plus = rest.find('+');
        spec.classes.push_back(ParseClass(rest.substr(0, plus)));
        rest = plus == std::string_view::npos ? std::string_view() : rest.substr(plus + 1);
      }
    } else {
      throw InputError("generator spec: unknown key '" + std::string(key) + "'");
    }
  }
  Validate(spec);
  return spec;
}

std::vector<GeneratedInstance> GenerateInstances(uint64_t seed, const GeneratorSpec& spec) {
  Validate(spec);
  std::vector<GeneratedInstance> out;
  out.reserve(spec.count);
  for (int k = 0; k < spec.count; ++k) out.push_back(GenerateOne(seed, k, spec));
  return out;
}

}  // namespace osea
