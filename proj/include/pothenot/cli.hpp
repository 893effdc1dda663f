#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pothenot::cli {

enum ExitCode { kOk = 0, kUsage = 1, kInconclusive = 2, kMismatch = 3 };

/// Runs one invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pothenot::cli
