#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace locc::cli {

enum ExitCode { kOk = 0, kInvariantViolation = 1, kInputError = 2 };

/// Runs the command line `args` (without the program name). Reports go to
/// `out` unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace locc::cli
