#pragma once

#include <string>
#include <vector>

namespace ccn {

/// Entry point of the `ccn` tool. `args` excludes the program name.
/// Returns 0 on success, 1 on invalid input, 2 on numerical failure.
int run_cli(const std::vector<std::string>& args);

}  // namespace ccn
