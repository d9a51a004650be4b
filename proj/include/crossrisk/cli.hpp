#pragma once

#include <string>
#include <vector>

namespace crossrisk {

// Runs one CLI invocation; args exclude the program name. Returns the
// process exit status: 0 success, 2 usage/config errors, 1 runtime errors.
int cli_dispatch(std::vector<std::string> args);

}  // namespace crossrisk
