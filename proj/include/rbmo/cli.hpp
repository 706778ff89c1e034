#pragma once

#include <string>
#include <vector>

namespace rbmo {

/// Runs the command-line tool. Exit codes: 0 all checks pass, 1 a mathematical
/// check failed, 2 usage or configuration error.
int run_cli(const std::vector<std::string>& args);

}  // namespace rbmo
