#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mlsh::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 1,
    kDataError = 2,
};

/// Runs the `mlsh` command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mlsh::cli
