// Free-format MPS reading and writing, plus the plain `name value` solution
// file format emitted by the command-line tool.

#ifndef OSEA_MPS_H_
#define OSEA_MPS_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "osea/model.h"

namespace osea {

class ParseError : public InputError {
 public:
  ParseError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

struct MpsOptions {
  // Integer columns without any upper bound get [0, 1] instead of [0, inf).
  bool legacy_integer_bounds = false;
};

// Sections: NAME, OBJSENSE, ROWS, COLUMNS, RHS, RANGES, BOUNDS, ENDATA.
// Keywords are case-insensitive, row and column names are not. Recoverable
// oddities (extra N rows, negative UP on a default lower bound) are appended
// to `warnings` when given.
MilpInstance ParseMps(std::string_view text, const MpsOptions& options = {},
                      std::vector<std::string>* warnings = nullptr);

// Reads `path`, or standard input when `path` is "-".
MilpInstance ReadMpsFile(const std::string& path, const MpsOptions& options = {},
                         std::vector<std::string>* warnings = nullptr);

// Values are printed with 17 significant digits so parsing the output gives
// back the same doubles.
std::string WriteMps(const MilpInstance& instance);

// One `name value` line per nonzero entry of x.
std::string WriteSolution(const MilpInstance& instance, std::span<const double> x);

// Inverse of WriteSolution; names not listed are zero.
std::vector<double> ParseSolution(std::string_view text, const MilpInstance& instance);

std::string ReadTextFile(const std::string& path);

}  // namespace osea

#endif  // OSEA_MPS_H_
