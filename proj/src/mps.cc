#include "osea/mps.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace osea {
namespace {

// Bound magnitudes at or beyond this are read as infinite.
constexpr double kMpsInfinity = 1e30;

enum class Section { kNone, kName, kObjSense, kRows, kColumns, kRhs, kRanges, kBounds };

std::string Upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string_view> Tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

std::optional<double> ToDouble(std::string_view token) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) return std::nullopt;
  return value;
}

std::string FormatValue(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct ColumnState {
  bool marked = false;
  bool declared_binary = false;
  bool integer_bound = false;
  bool lower_set = false;
  bool upper_set = false;
};

class MpsReader {
 public:
  MpsReader(const MpsOptions& options, std::vector<std::string>* warnings)
      : options_(options), warnings_(warnings) {}

  MilpInstance Parse(std::string_view text) {
    size_t pos = 0;
    bool ended = false;
    while (pos < text.size() && !ended) {
      size_t eol = text.find('\n', pos);
      if (eol == std::string_view::npos) eol = text.size();
      std::string_view line = text.substr(pos, eol - pos);
      pos = eol + 1;
      ++line_;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      ended = HandleLine(line);
    }
    if (!ended) Fail("unexpected end of input, missing ENDATA");
    if (in_integer_block_) Fail("INTORG marker without matching INTEND");
    return Finish();
  }

 private:
  [[noreturn]] void Fail(const std::string& message) const { throw ParseError(line_, message); }

  void Warn(const std::string& message) {
    if (warnings_) warnings_->push_back("line " + std::to_string(line_) + ": " + message);
  }

  double Number(std::string_view token) const {
    const auto value = ToDouble(token);
    if (!value) Fail("invalid numeric field '" + std::string(token) + "'");
    return *value;
  }

  double FiniteNumber(std::string_view token) const {
    const double v = Number(token);
    if (!std::isfinite(v)) Fail("non-finite value '" + std::string(token) + "'");
    return v;
  }

  double BoundNumber(std::string_view token) const {
    const double v = Number(token);
    if (std::isnan(v)) Fail("NaN bound value");
    if (v >= kMpsInfinity) return kInfinity;
    if (v <= -kMpsInfinity) return -kInfinity;
    return v;
  }

  // Returns true when ENDATA was reached.
  bool HandleLine(std::string_view line) {
    if (line.empty() || line.front() == '*') return false;
    const auto tokens = Tokenize(line);
    if (tokens.empty()) return false;
    if (!std::isspace(static_cast<unsigned char>(line.front()))) {
      return HandleHeader(tokens);
    }
    switch (section_) {
      case Section::kNone:
      case Section::kName:
        Fail("data line outside of a section");
      case Section::kObjSense:
        SetSense(tokens[0]);
        return false;
      case Section::kRows:
        HandleRow(tokens);
        return false;
      case Section::kColumns:
        HandleColumn(tokens);
        return false;
      case Section::kRhs:
        HandleRhsOrRange(tokens, /*is_range=*/false);
        return false;
      case Section::kRanges:
        HandleRhsOrRange(tokens, /*is_range=*/true);
        return false;
      case Section::kBounds:
        HandleBound(tokens);
        return false;
    }
    return false;
  }

  bool HandleHeader(const std::vector<std::string_view>& tokens) {
    const std::string keyword = Upper(tokens[0]);
    if (keyword == "ENDATA") return true;
    if (keyword == "NAME") {
      section_ = Section::kName;
      if (tokens.size() > 1) data_.name = std::string(tokens[1]);
    } else if (keyword == "OBJSENSE") {
      section_ = Section::kObjSense;
      if (tokens.size() > 1) SetSense(tokens[1]);
    } else if (keyword == "ROWS") {
      section_ = Section::kRows;
      seen_rows_ = true;
    } else if (keyword == "COLUMNS") {
      if (!seen_rows_) Fail("COLUMNS section before ROWS");
      section_ = Section::kColumns;
    } else if (keyword == "RHS") {
      RequireColumnsSeen(keyword);
      section_ = Section::kRhs;
    } else if (keyword == "RANGES") {
      RequireColumnsSeen(keyword);
      section_ = Section::kRanges;
    } else if (keyword == "BOUNDS") {
      RequireColumnsSeen(keyword);
      section_ = Section::kBounds;
    } else {
      Fail("unknown section '" + std::string(tokens[0]) + "'");
    }
    if (section_ != Section::kColumns && in_integer_block_) {
      Fail("INTORG marker without matching INTEND");
    }
    return false;
  }

  void RequireColumnsSeen(const std::string& keyword) const {
    if (!seen_rows_) Fail(keyword + " section before ROWS");
  }

  void SetSense(std::string_view token) {
    const std::string s = Upper(token);
    if (s == "MAX" || s == "MAXIMIZE") {
      data_.sense = ObjectiveSense::kMaximize;
    } else if (s == "MIN" || s == "MINIMIZE") {
      data_.sense = ObjectiveSense::kMinimize;
    } else {
      Fail("unknown objective sense '" + std::string(token) + "'");
    }
  }

  void HandleRow(const std::vector<std::string_view>& tokens) {
    if (tokens.size() != 2) Fail("ROWS entry needs a type and a name");
    const std::string type = Upper(tokens[0]);
    const std::string name(tokens[1]);
    if (row_index_.contains(name) || (has_objective_ && name == data_.objective_name) ||
        ignored_rows_.contains(name)) {
      Fail("duplicate row '" + name + "'");
    }
    if (type == "N") {
      if (!has_objective_) {
        has_objective_ = true;
        data_.objective_name = name;
      } else {
        Warn("additional objective row '" + name + "' ignored");
        ignored_rows_.insert(name);
      }
      return;
    }
    RowConstraint row;
    if (type == "G") {
      row.sense = RowConstraint::Sense::kGreaterEqual;
    } else if (type == "L") {
      row.sense = RowConstraint::Sense::kLessEqual;
    } else if (type == "E") {
      row.sense = RowConstraint::Sense::kEqual;
    } else {
      Fail("unknown row type '" + std::string(tokens[0]) + "'");
    }
    row_index_.emplace(name, static_cast<int>(data_.rows.size()));
    data_.rows.push_back(row);
    data_.row_names.push_back(name);
    ranges_.push_back(std::nullopt);
  }

  // Resolves a row name to its index; -1 for the objective, -2 for ignored
  // N rows.
  int RowRef(std::string_view token) const {
    const std::string name(token);
    if (has_objective_ && name == data_.objective_name) return -1;
    if (ignored_rows_.contains(name)) return -2;
    const auto it = row_index_.find(name);
    if (it == row_index_.end()) Fail("reference to undeclared row '" + name + "'");
    return it->second;
  }

  int ColumnRef(std::string_view token) const {
    const auto it = col_index_.find(std::string(token));
    if (it == col_index_.end()) Fail("reference to undeclared column '" + std::string(token) + "'");
    return it->second;
  }

  void HandleColumn(const std::vector<std::string_view>& tokens) {
    if (tokens.size() >= 3 && Upper(tokens[1]) == "'MARKER'") {
      const std::string marker = Upper(tokens[2]);
      if (marker == "'INTORG'") {
        if (in_integer_block_) Fail("nested INTORG marker");
        in_integer_block_ = true;
      } else if (marker == "'INTEND'") {
        if (!in_integer_block_) Fail("INTEND marker without INTORG");
        in_integer_block_ = false;
      } else {
        Fail("unknown marker '" + std::string(tokens[2]) + "'");
      }
      return;
    }
    if (tokens.size() != 3 && tokens.size() != 5) {
      Fail("COLUMNS entry needs a column name and one or two row/value pairs");
    }
    const std::string name(tokens[0]);
    auto [it, inserted] = col_index_.emplace(name, static_cast<int>(data_.cost.size()));
    const int col = it->second;
    if (inserted) {
      data_.col_names.push_back(name);
      data_.cost.push_back(0.0);
      columns_.push_back({});
      columns_.back().marked = in_integer_block_;
    } else if (columns_[col].marked != in_integer_block_) {
      Fail("column '" + name + "' appears both inside and outside integer markers");
    }
    for (size_t k = 1; k + 1 < tokens.size(); k += 2) {
      const int row = RowRef(tokens[k]);
      const double value = FiniteNumber(tokens[k + 1]);
      if (row == -2) continue;
      const auto key = (static_cast<uint64_t>(static_cast<uint32_t>(row + 1)) << 32) |
                       static_cast<uint32_t>(col);
      if (!seen_entries_.insert(key).second) {
        Fail("duplicate entry for column '" + name + "' in row '" + std::string(tokens[k]) + "'");
      }
      if (row == -1) {
        data_.cost[col] = value;
      } else {
        data_.entries.push_back({row, col, value});
      }
    }
  }

  void HandleRhsOrRange(const std::vector<std::string_view>& tokens, bool is_range) {
    // Optional leading set name: odd token counts carry one.
    size_t first = 0;
    if (tokens.size() == 3 || tokens.size() == 5) {
      first = 1;
    } else if (tokens.size() != 2 && tokens.size() != 4) {
      Fail(std::string(is_range ? "RANGES" : "RHS") + " entry has a bad field count");
    }
    for (size_t k = first; k + 1 < tokens.size(); k += 2) {
      const int row = RowRef(tokens[k]);
      const double value = FiniteNumber(tokens[k + 1]);
      if (row == -2) continue;
      if (row == -1) {
        if (is_range) {
          Warn("RANGES entry on the objective row ignored");
        } else {
          data_.objective_offset = -value;
        }
        continue;
      }
      if (is_range) {
        ranges_[row] = value;
      } else {
        data_.rows[row].rhs = value;
      }
    }
  }

  void HandleBound(const std::vector<std::string_view>& tokens) {
    const std::string type = Upper(tokens[0]);
    const size_t rest = tokens.size() - 1;
    std::string_view col_token;
    std::optional<std::string_view> value_token;
    const bool needs_value = type == "UP" || type == "LO" || type == "FX" ||
                             type == "LI" || type == "UI";
    const bool no_value = type == "FR" || type == "MI" || type == "PL";
    if (needs_value) {
      if (rest == 3) {
        col_token = tokens[2];
        value_token = tokens[3];
      } else if (rest == 2) {
        col_token = tokens[1];
        value_token = tokens[2];
      } else {
        Fail("bound " + type + " needs a column and a value");
      }
    } else if (no_value || type == "BV") {
      if (rest == 1) {
        col_token = tokens[1];
      } else if (rest == 2) {
        const bool first_is_column = col_index_.contains(std::string(tokens[1]));
        col_token = (type == "BV" && first_is_column) ? tokens[1] : tokens[2];
      } else if (rest == 3) {
        col_token = tokens[2];
      } else {
        Fail("bound " + type + " has a bad field count");
      }
    } else {
      Fail("unknown bound type '" + std::string(tokens[0]) + "'");
    }

    const int col = ColumnRef(col_token);
    ColumnState& state = columns_[col];
    EnsureBounds();
    double& lo = data_.lower[col];
    double& up = data_.upper[col];
    const double v = value_token ? BoundNumber(*value_token) : 0.0;
    if (type == "UP" || type == "UI") {
      up = v;
      state.upper_set = true;
      if (v < 0.0 && lo == 0.0 && !state.lower_set) {
        lo = -kInfinity;
        Warn("negative upper bound on '" + std::string(col_token) + "' sets lower bound to -inf");
      }
      if (type == "UI") state.integer_bound = true;
    } else if (type == "LO" || type == "LI") {
      lo = v;
      state.lower_set = true;
      if (type == "LI") state.integer_bound = true;
    } else if (type == "FX") {
      lo = v;
      up = v;
      state.lower_set = state.upper_set = true;
    } else if (type == "FR") {
      lo = -kInfinity;
      up = kInfinity;
      state.lower_set = state.upper_set = true;
    } else if (type == "MI") {
      lo = -kInfinity;
      state.lower_set = true;
    } else if (type == "PL") {
      up = kInfinity;
      state.upper_set = true;
    } else if (type == "BV") {
      lo = 0.0;
      up = 1.0;
      state.declared_binary = true;
      state.lower_set = state.upper_set = true;
    }
  }

  void EnsureBounds() {
    const size_t n = data_.cost.size();
    data_.lower.resize(n, 0.0);
    data_.upper.resize(n, kInfinity);
  }

  MilpInstance Finish() {
    if (!has_objective_) Warn("no objective row; objective is zero");
    EnsureBounds();
    const int n = static_cast<int>(data_.cost.size());
    data_.kinds.assign(n, VarKind::kContinuous);
    for (int j = 0; j < n; ++j) {
      const ColumnState& state = columns_[j];
      if (state.declared_binary) {
        data_.kinds[j] = VarKind::kBinary;
        continue;
      }
      if (!state.marked && !state.integer_bound) continue;
      if (options_.legacy_integer_bounds && !state.upper_set) data_.upper[j] = 1.0;
      const bool unit_box = data_.lower[j] == 0.0 && data_.upper[j] == 1.0;
      data_.kinds[j] = unit_box ? VarKind::kBinary : VarKind::kInteger;
    }
    for (size_t i = 0; i < data_.rows.size(); ++i) {
      if (!ranges_[i]) continue;
      const double r = *ranges_[i];
      RowConstraint& row = data_.rows[i];
      const double b = row.rhs;
      switch (row.sense) {
        case RowConstraint::Sense::kGreaterEqual:
          row = RowConstraint::Range(b, std::abs(r));
          break;
        case RowConstraint::Sense::kLessEqual:
          row = RowConstraint::Range(b - std::abs(r), std::abs(r));
          break;
        case RowConstraint::Sense::kEqual:
          row = r >= 0.0 ? RowConstraint::Range(b, r) : RowConstraint::Range(b + r, -r);
          break;
        case RowConstraint::Sense::kRange:
          break;
      }
    }
    try {
      return MilpInstance(std::move(data_));
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      Fail(e.what());
    }
  }

  const MpsOptions& options_;
  std::vector<std::string>* warnings_;
  int line_ = 0;
  Section section_ = Section::kNone;
  bool seen_rows_ = false;
  bool has_objective_ = false;
  bool in_integer_block_ = false;
  MilpData data_;
  std::vector<ColumnState> columns_;
  std::vector<std::optional<double>> ranges_;
  std::unordered_map<std::string, int> row_index_;
  std::unordered_map<std::string, int> col_index_;
  std::unordered_set<std::string> ignored_rows_;
  std::unordered_set<uint64_t> seen_entries_;
};

}  // namespace

ParseError::ParseError(int line, const std::string& message)
    : InputError("line " + std::to_string(line) + ": " + message), line_(line) {}

MilpInstance ParseMps(std::string_view text, const MpsOptions& options,
                      std::vector<std::string>* warnings) {
  return MpsReader(options, warnings).Parse(text);
}

std::string ReadTextFile(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

MilpInstance ReadMpsFile(const std::string& path, const MpsOptions& options,
                         std::vector<std::string>* warnings) {
  return ParseMps(ReadTextFile(path), options, warnings);
}

std::string WriteMps(const MilpInstance& instance) {
  const MilpData& d = instance.data();
  const int n = instance.num_vars();
  std::ostringstream out;
  out << "NAME " << (d.name.empty() ? "UNNAMED" : d.name) << '\n';
  if (d.sense == ObjectiveSense::kMaximize) out << "OBJSENSE\n    MAX\n";
  out << "ROWS\n N  " << d.objective_name << '\n';
  for (int i = 0; i < instance.num_rows(); ++i) {
    char type = 'G';
    switch (d.rows[i].sense) {
      case RowConstraint::Sense::kGreaterEqual: type = 'G'; break;
      case RowConstraint::Sense::kLessEqual: type = 'L'; break;
      case RowConstraint::Sense::kEqual: type = 'E'; break;
      case RowConstraint::Sense::kRange: type = 'G'; break;
    }
    out << ' ' << type << "  " << d.row_names[i] << '\n';
  }

  std::vector<std::vector<std::pair<int, double>>> by_col(n);
  for (const Triplet& t : d.entries) by_col[t.col].emplace_back(t.row, t.value);

  out << "COLUMNS\n";
  bool in_marker = false;
  int marker_count = 0;
  for (int j = 0; j < n; ++j) {
    const bool integer = instance.is_integer(j);
    if (integer != in_marker) {
      out << "    MARKER" << marker_count++ << "  'MARKER'  " << (integer ? "'INTORG'" : "'INTEND'")
          << '\n';
      in_marker = integer;
    }
    const std::string& name = d.col_names[j];
    if (d.cost[j] != 0.0 || by_col[j].empty()) {
      out << "    " << name << "  " << d.objective_name << "  " << FormatValue(d.cost[j]) << '\n';
    }
    for (const auto& [row, value] : by_col[j]) {
      out << "    " << name << "  " << d.row_names[row] << "  " << FormatValue(value) << '\n';
    }
  }
  if (in_marker) out << "    MARKER" << marker_count << "  'MARKER'  'INTEND'\n";

  out << "RHS\n";
  if (d.objective_offset != 0.0) {
    out << "    RHS  " << d.objective_name << "  " << FormatValue(-d.objective_offset) << '\n';
  }
  for (int i = 0; i < instance.num_rows(); ++i) {
    if (d.rows[i].rhs != 0.0) {
      out << "    RHS  " << d.row_names[i] << "  " << FormatValue(d.rows[i].rhs) << '\n';
    }
  }
  bool any_range = false;
  for (int i = 0; i < instance.num_rows(); ++i) {
    if (d.rows[i].sense != RowConstraint::Sense::kRange) continue;
    if (!any_range) out << "RANGES\n";
    any_range = true;
    out << "    RNG  " << d.row_names[i] << "  " << FormatValue(d.rows[i].range) << '\n';
  }

  std::ostringstream bounds;
  for (int j = 0; j < n; ++j) {
    const std::string& name = d.col_names[j];
    const double lo = d.lower[j];
    const double up = d.upper[j];
    if (d.kinds[j] == VarKind::kBinary) {
      bounds << " BV BND  " << name << '\n';
      if (lo != 0.0) bounds << " LO BND  " << name << "  " << FormatValue(lo) << '\n';
      if (up != 1.0) bounds << " UP BND  " << name << "  " << FormatValue(up) << '\n';
      continue;
    }
    if (lo == -kInfinity && up == kInfinity) {
      bounds << " FR BND  " << name << '\n';
    } else if (lo == up) {
      bounds << " FX BND  " << name << "  " << FormatValue(lo) << '\n';
    } else {
      if (lo == -kInfinity) {
        bounds << " MI BND  " << name << '\n';
      } else if (lo != 0.0) {
        bounds << " LO BND  " << name << "  " << FormatValue(lo) << '\n';
      }
      if (up != kInfinity) bounds << " UP BND  " << name << "  " << FormatValue(up) << '\n';
    }
  }
  if (!bounds.str().empty()) out << "BOUNDS\n" << bounds.str();
  out << "ENDATA\n";
  return out.str();
}

std::string WriteSolution(const MilpInstance& instance, std::span<const double> x) {
  if (static_cast<int>(x.size()) != instance.num_vars()) {
    throw DimensionError("solution length does not match the instance");
  }
  std::ostringstream out;
  for (int j = 0; j < instance.num_vars(); ++j) {
    if (x[j] != 0.0) out << instance.data().col_names[j] << ' ' << FormatValue(x[j]) << '\n';
  }
  return out.str();
}

std::vector<double> ParseSolution(std::string_view text, const MilpInstance& instance) {
  std::unordered_map<std::string_view, int> index;
  for (int j = 0; j < instance.num_vars(); ++j) index.emplace(instance.data().col_names[j], j);
  std::vector<double> x(instance.num_vars(), 0.0);
  int line_no = 0;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const auto tokens = Tokenize(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (tokens.empty() || tokens[0].front() == '#') continue;
    if (tokens.size() != 2) throw ParseError(line_no, "expected 'name value'");
    const auto it = index.find(tokens[0]);
    if (it == index.end()) {
      throw ParseError(line_no, "unknown variable '" + std::string(tokens[0]) + "'");
    }
    const auto value = ToDouble(tokens[1]);
    if (!value) throw ParseError(line_no, "invalid value '" + std::string(tokens[1]) + "'");
    x[it->second] = *value;
  }
  return x;
}

}  // namespace osea
