#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace margbayes::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kShapeMismatch = 3,
  kNumericalFailure = 4,
  kHypothesisUnmet = 5,
};

/// Runs the command line `args` (without the program name), writing results to
/// `out` and diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace margbayes::cli
