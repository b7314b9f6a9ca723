#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace d4::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailure = 1,
  kUsageError = 2,
  kCapacityError = 3,
};

inline constexpr const char* kVersion = "1.0.0";

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace d4::cli
