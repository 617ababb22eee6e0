#include "adbb/error.hpp"

namespace adbb {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidConfig:
      return "InvalidConfig";
    case ErrorCode::kDimensionMismatch:
      return "DimensionMismatch";
    case ErrorCode::kNonFiniteInput:
      return "NonFiniteInput";
    case ErrorCode::kNotPrimitive:
      return "NotPrimitive";
    case ErrorCode::kNotStronglyConnected:
      return "NotStronglyConnected";
    case ErrorCode::kNotStronglyConvex:
      return "NotStronglyConvex";
    case ErrorCode::kBudgetExceeded:
      return "BudgetExceeded";
    case ErrorCode::kNumericalBlowup:
      return "NumericalBlowup";
    case ErrorCode::kInfeasibleC:
      return "InfeasibleC";
    case ErrorCode::kTraceIncomplete:
      return "TraceIncomplete";
    case ErrorCode::kFileFormatError:
      return "FileFormatError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace adbb
