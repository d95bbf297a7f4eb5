#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sigloc::cli {

/// Runs the command-line driver on the given arguments (excluding argv[0]).
/// Returns the process exit code: 0 success / all checks passed, 1 a check
/// failed or a requested set has zero measure, 2 usage or validation error,
/// 3 I/O error.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace sigloc::cli
