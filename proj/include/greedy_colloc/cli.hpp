#pragma once

#include <string>
#include <vector>

namespace gcol {

/// Entry point of `greedy-colloc`; `args` excludes the program name. Returns the exit code:
/// 0 on completion, 1 on runtime failures, 2 on usage or configuration errors.
int cli_main(const std::vector<std::string>& args);

}  // namespace gcol
