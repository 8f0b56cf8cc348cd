#include "gie/errors.hpp"

namespace gie {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidSetup: return "InvalidSetup";
    case ErrorCode::NegativeSquaredFrequency: return "NegativeSquaredFrequency";
    case ErrorCode::UnstableFrame: return "UnstableFrame";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonHermitianInput: return "NonHermitianInput";
    case ErrorCode::CutoffTooSmall: return "CutoffTooSmall";
    case ErrorCode::EigenFailure: return "EigenFailure";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InvalidAxis: return "InvalidAxis";
    case ErrorCode::InsufficientPoints: return "InsufficientPoints";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace gie
