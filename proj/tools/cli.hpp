#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bpbr::cli {

/// Exit codes: 0 success, 1 usage, 2 input/parse error, 3 statistical error
/// (the error name is printed verbatim), 4 every simulated replicate failed.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDataError = 2,
  kStatisticalError = 3,
  kAllReplicatesFailed = 4,
};

/// Environment variable that relocates relative output paths.
inline constexpr const char* kOutputDirEnv = "BPBR_OUTPUT_DIR";

/// args excludes the program name. Results go to `out` unless -o is given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bpbr::cli
