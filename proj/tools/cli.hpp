#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gabor::cli {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kVerifyFailed = 1,
    kBadParameters = 2,
    kBackendDisagreement = 3,
    kNotAFrame = 4,
    kZakNeedsIntegerOversampling = 5,
    kNoConvergence = 6,
};

/// Runs one `gabortool` invocation; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace gabor::cli
