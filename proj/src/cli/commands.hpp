#pragma once

#include <iosfwd>

namespace starkmem::cli {

enum ExitCode : int {
    kOk = 0,
    kIoError = 1,
    kConfigError = 2,
    kPhysicsError = 3,
    kInfeasible = 4,
};

/// Parses argv, runs one subcommand and maps library errors onto exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace starkmem::cli
