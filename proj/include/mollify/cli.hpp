#pragma once

#include <string>
#include <vector>

namespace mollify::cli {

/// Full command-line front end. Exit codes: 0 success, 1 numerical failure,
/// 2 validation failure.
int run(int argc, const char* const* argv);

/// Convenience overload for in-process tests; args exclude the program name.
int run(const std::vector<std::string>& args);

}  // namespace mollify::cli
