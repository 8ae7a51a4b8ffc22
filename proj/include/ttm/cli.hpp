#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ttm::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kGenerationError = 3, kQueryError = 4 };

/// Runs the command line `args` (program name first) and returns the exit
/// code. Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ttm::cli
