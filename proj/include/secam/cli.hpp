#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace secam::cli {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kUsage = 2,
    kNoData = 3,
};

/// Runs the command line; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace secam::cli
