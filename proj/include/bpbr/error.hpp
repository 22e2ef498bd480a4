#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bpbr {

enum class ErrorCode {
  EmptyInput,
  NonFiniteValue,
  BlockModeNeedsTwoGroups,
  NoSlopesRemaining,
  OffsetOutOfRange,
  NegativeVariance,
  IndexOutOfRange,
  OutOfDomain,
  AllReplicatesFailed,
  InvalidArgument,
  ParseError,
};

std::string_view error_name(ErrorCode code) noexcept;

/// Data errors (bad input) vs statistical infeasibility; the CLI maps these
/// to distinct exit codes.
bool is_data_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) +
                           (detail.empty() ? "" : ": " + detail)),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace bpbr
