#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace seqdisc {

enum class ErrorCode {
  OutOfRange,
  ConstraintViolation,
  NumericalDegeneracy,
  UnsupportedPriors,
  UnknownFigure,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a stable error code. All library failures throw this.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfRange: return "OUT_OF_RANGE";
    case ErrorCode::ConstraintViolation: return "CONSTRAINT_VIOLATION";
    case ErrorCode::NumericalDegeneracy: return "NUMERICAL_DEGENERACY";
    case ErrorCode::UnsupportedPriors: return "UNSUPPORTED_PRIORS";
    case ErrorCode::UnknownFigure: return "UNKNOWN_FIGURE";
  }
  return "UNKNOWN";
}

}  // namespace seqdisc
