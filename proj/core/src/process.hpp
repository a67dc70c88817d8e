#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace patmine::detail {

struct ProcessResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs argv[0] (looked up on PATH) to completion. stdin_data is fed to the
// child while its stdout and stderr are drained, so large outputs cannot
// deadlock the pipes.
ProcessResult run_process(const std::vector<std::string>& argv,
                          std::string_view stdin_data = {});

}  // namespace patmine::detail
