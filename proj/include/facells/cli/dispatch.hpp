// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace facells::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kNumeric = 3 };

/// Runs `facells-kit` with argv[0] == program name. Every subcommand ends
/// its stdout with a "STATUS key=value ..." line.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
/// Convenience overload; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace facells::cli
