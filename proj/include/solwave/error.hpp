#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace solwave {

enum class ErrorCode {
  GridMismatch,
  TailTooLarge,
  SubcriticalSpeed,
  OutOfDomain,
  ExponentWindow,
  InvalidArgument,
  UnsupportedRegularity,
  MaxIter,
  MuTooLarge,
  BallExit,
  NoConvergence,
  Blowup,
  ResolutionLoss,
  InvalidSymbol,
  ConfigError,
  IoError,
};

inline std::string_view toString(ErrorCode code) {
  switch (code) {
    case ErrorCode::GridMismatch: return "GRID_MISMATCH";
    case ErrorCode::TailTooLarge: return "TAIL_TOO_LARGE";
    case ErrorCode::SubcriticalSpeed: return "SUBCRITICAL_SPEED";
    case ErrorCode::OutOfDomain: return "OUT_OF_DOMAIN";
    case ErrorCode::ExponentWindow: return "EXPONENT_WINDOW";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::UnsupportedRegularity: return "UNSUPPORTED_REGULARITY";
    case ErrorCode::MaxIter: return "MAX_ITER";
    case ErrorCode::MuTooLarge: return "MU_TOO_LARGE";
    case ErrorCode::BallExit: return "BALL_EXIT";
    case ErrorCode::NoConvergence: return "NO_CONVERGENCE";
    case ErrorCode::Blowup: return "BLOWUP";
    case ErrorCode::ResolutionLoss: return "RESOLUTION_LOSS";
    case ErrorCode::InvalidSymbol: return "INVALID_SYMBOL";
    case ErrorCode::ConfigError: return "CONFIG_ERROR";
    case ErrorCode::IoError: return "IO_ERROR";
  }
  return "UNKNOWN";
}

/// Exception carrying a machine-readable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(toString(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace solwave
