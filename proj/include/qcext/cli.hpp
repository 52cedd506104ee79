#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qcext::cli {

enum ExitCode : int {
  kPass = 0,
  kPropertyFailure = 1,
  kUsageError = 2,
  kNumericalFailure = 3,
};

/// Runs the command line `args` (args[0] is the program name). Output goes to
/// `out`, diagnostics to `err`; the return value is the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qcext::cli
