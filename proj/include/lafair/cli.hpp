#pragma once

#include <string>
#include <vector>

namespace lafair {

// Parses and executes one toolkit command. `args` excludes the program name.
// Returns the process exit status.
int run_cli(const std::vector<std::string>& args);

} // namespace lafair
