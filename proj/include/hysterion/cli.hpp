#pragma once

#include <string>
#include <vector>

namespace hyst {

// Runs one tool invocation (args exclude argv[0]) and returns the process
// exit code: 0 success, 2 usage or parameter errors, 3 runtime failures
// (including a failed verification).
int cli_dispatch(const std::vector<std::string>& args);

}  // namespace hyst
