#pragma once

#include <string>
#include <vector>

namespace qtdlab {

/// Dispatches one CLI invocation (argv without the program name) and returns
/// the process exit code: 0 success, 1 usage/config error, 2 numerical
/// failure (divergence or non-convergence present in the results).
int run_cli(const std::vector<std::string>& args);

}  // namespace qtdlab
