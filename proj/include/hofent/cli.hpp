#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hofent::cli {

/// Exit codes: 0 success, 1 a requested computation failed, 2 usage or
/// input-file error.
inline constexpr int kOk = 0;
inline constexpr int kComputationFailed = 1;
inline constexpr int kUsage = 2;

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace hofent::cli
