#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace foldcore {

enum ExitCode : int {
  kExitOk = 0,
  kExitInvalid = 2,
  kExitCheckFailed = 3,
  kExitSingular = 4,
  kExitOverflow = 5,
};

/// Runs the command line `args` (without the program name). Reports go to
/// `out` unless redirected by --out; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace foldcore
