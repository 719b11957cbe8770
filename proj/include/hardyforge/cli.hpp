#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hardyforge {

inline constexpr const char* kCliVersion = "0.1.0";
inline constexpr const char* kJsonSchema = "hardy-forge/1";

/// Runs the command-line front end. `args` excludes the program name.
/// Returns the process exit code: 0 success/PASS, 1 FAIL, 2 indeterminate,
/// 64 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hardyforge
