#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gstab {

enum class ErrorCode {
  kInvalidArgument,
  kEdgeLeakage,
  kNoBracket,
  kNegativeDensity,
  kUnderresolvedOscillation,
  kMarginalUnderflow,
  kMedianBracketFailure,
  kOrderOverflow,
  kBreakpointOutOfRange,
  kWeightOverflow,
  kDenominatorUnderflow,
  kReconstructionOverflow,
  kNotACdf,
  kDomainError,
  kMonotoneInversionFailure,
  kConfigParse,
  kIoError,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-checkable error category.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace gstab
