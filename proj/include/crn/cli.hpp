#pragma once

#include <string>
#include <vector>

namespace crn {

/// Parses and runs one CLI invocation (argv without the program name).
/// Exit codes: 0 success/certified, 1 check failed, 2 usage or model error,
/// 3 numerical failure. Failures print a JSON error object to stderr.
int run_command(const std::vector<std::string>& args);

} // namespace crn
