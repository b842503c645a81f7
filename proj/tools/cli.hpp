#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace asgem::cli {

enum ExitCode : int {
    ok = 0,
    usage = 2,
    physics = 3,
    output_conflict = 4,
    truncated = 5,
    interrupted = 130,
};

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace asgem::cli
