#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace patmine::cli {

constexpr int kExitOk = 0;
constexpr int kExitMatchesFound = 1;  // only with --fail-on-match
constexpr int kExitUsage = 2;

// Entry point shared by the executable and the tests. args[0] is the
// program name. Tables and JSON go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace patmine::cli
