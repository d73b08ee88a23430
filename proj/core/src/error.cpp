#include "gauss_stab/error.hpp"

namespace gstab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kEdgeLeakage: return "EdgeLeakage";
    case ErrorCode::kNoBracket: return "NoBracket";
    case ErrorCode::kNegativeDensity: return "NegativeDensity";
    case ErrorCode::kUnderresolvedOscillation: return "UnderresolvedOscillation";
    case ErrorCode::kMarginalUnderflow: return "MarginalUnderflow";
    case ErrorCode::kMedianBracketFailure: return "MedianBracketFailure";
    case ErrorCode::kOrderOverflow: return "OrderOverflow";
    case ErrorCode::kBreakpointOutOfRange: return "BreakpointOutOfRange";
    case ErrorCode::kWeightOverflow: return "WeightOverflow";
    case ErrorCode::kDenominatorUnderflow: return "DenominatorUnderflow";
    case ErrorCode::kReconstructionOverflow: return "ReconstructionOverflow";
    case ErrorCode::kNotACdf: return "NotACdf";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kMonotoneInversionFailure: return "MonotoneInversionFailure";
    case ErrorCode::kConfigParse: return "ConfigParse";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace gstab
