#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace adbb {

enum class ErrorCode {
  kInvalidConfig,
  kDimensionMismatch,
  kNonFiniteInput,
  kNotPrimitive,
  kNotStronglyConnected,
  kNotStronglyConvex,
  kBudgetExceeded,
  kNumericalBlowup,
  kInfeasibleC,
  kTraceIncomplete,
  kFileFormatError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it to an exit status and tests can match on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace adbb
