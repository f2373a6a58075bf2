#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dpp::cli {

enum ExitCode : int
{
    kOk = 0,
    kIoError = 1,
    kUsage = 2,
    kNumericFailure = 3,
};

/// Runs one invocation. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dpp::cli
