#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rlspec::cli {

enum ExitCode : int { ok = 0, validation_failure = 2, numerical_failure = 3 };

/// Runs the rlspec command line with args[0] as the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rlspec::cli
