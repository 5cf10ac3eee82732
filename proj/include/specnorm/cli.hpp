#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace specnorm::cli {

/// Process exit codes.
enum ExitCode : int {
  kNormal = 0, ///< Normal verdict, or success for commands without a verdict
  kNonnormal = 1,
  kIndeterminate = 2,
  kUsage = 3, ///< bad flags, unreadable or malformed files
};

/// Runs one CLI invocation. `args` excludes the program name. Results go to
/// `out`, diagnostics to `err`; the return value is always an ExitCode.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace specnorm::cli
