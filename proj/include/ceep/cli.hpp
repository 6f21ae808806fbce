#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ceep::cli {

enum ExitCode : int {
    kSuccess = 0,
    kVerdictNegative = 1,
    kUsageError = 2,
    kNumericalFailure = 3,
};

/// Runs one command. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ceep::cli
