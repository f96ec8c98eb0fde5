// Command-line front end. Kept as a library so tests can drive it without
// spawning processes.

#ifndef OSEA_TOOLS_CLI_H_
#define OSEA_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace osea {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitNotApplicable = 4;

// `args` excludes the program name. Standard input is read for an MPS path
// of "-".
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace osea

#endif  // OSEA_TOOLS_CLI_H_
