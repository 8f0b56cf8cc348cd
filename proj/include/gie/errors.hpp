#pragma once

#include <stdexcept>
#include <string>

namespace gie {

/// Failure categories shared by every module. The numeric values are the
/// status codes returned across the C API (see gie.h), so never reorder.
enum class ErrorCode : int {
  InvalidArgument = 1,
  InvalidSetup = 2,
  NegativeSquaredFrequency = 3,
  UnstableFrame = 4,
  DimensionMismatch = 5,
  NonHermitianInput = 6,
  CutoffTooSmall = 7,
  EigenFailure = 8,
  NoConvergence = 9,
  InvalidAxis = 10,
  InsufficientPoints = 11,
  ConfigError = 12,
  IoError = 13,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when the Fock cutoff cannot hold a state; carries the measured
/// probability mass that fell outside the retained levels.
class CutoffTooSmall : public Error {
 public:
  CutoffTooSmall(const std::string& message, double tail_mass)
      : Error(ErrorCode::CutoffTooSmall, message), tail_mass_(tail_mass) {}

  double tail_mass() const noexcept { return tail_mass_; }

 private:
  double tail_mass_;
};

/// Configuration problem located at a JSON path such as
/// "parameters.si.Q2".
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& message)
      : Error(ErrorCode::ConfigError, path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace gie
