#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace matterwave::cli {

enum ExitCode : int { kSuccess = 0, kIoFailure = 1, kInvalidInput = 2, kNotConverged = 3 };

/// Runs the command line `args` (without the program name). Reports go to the
/// files named by the flags; diagnostics and help go to `out` / `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv);

}  // namespace matterwave::cli
