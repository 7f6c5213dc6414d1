#pragma once

#include <iosfwd>

namespace qtrans::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kNumericalFailure = 2,
  kTrapDetected = 3,
};

/// Runs the `qtrans` command line. Everything the command prints goes to
/// `out` (results) and `err` (diagnostics); the return value is the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qtrans::cli
