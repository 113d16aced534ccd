#ifndef LAPCLOSE_TOOLS_CLI_HPP
#define LAPCLOSE_TOOLS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace lapclose::tools {

enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,
  kExitIncomplete = 2,  // time limit or stalled run
  kExitVerifyFailed = 3,
};

/// Entry point shared by the executable and the tests; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lapclose::tools

#endif
