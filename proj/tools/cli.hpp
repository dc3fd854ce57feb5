#pragma once

#include <string>
#include <vector>

namespace ramen::cli {

// Dispatches one invocation (arguments without the program name).
// Exit codes: 0 success, 1 runtime error, 2 usage error.
int run_command(const std::vector<std::string>& args);

}  // namespace ramen::cli
