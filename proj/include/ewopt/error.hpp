#ifndef EWOPT_ERROR_HPP
#define EWOPT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ewopt {

enum class ErrorCode {
  NonHermitianInput,
  DimensionMismatch,
  InvalidParams,
  InvalidState,
  NotAKernelVector,
  FirstOrderNonzero,
  EmptyZeroSet,
  NotPSD,
  SupportOverlapsZeros,
  ZeroOperator,
  NotBlockPositive,
  UnsupportedDimension,
  ParseError,
  IoError,
};

const char* to_string(ErrorCode code);

// Every failure in the library surfaces as an Error. `magnitude` carries the
// offending numeric quantity (hermiticity defect, kernel residual, ...) when
// there is one, and 0 otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, double magnitude = 0.0)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        magnitude_(magnitude) {}

  ErrorCode code() const noexcept { return code_; }
  double magnitude() const noexcept { return magnitude_; }

 private:
  ErrorCode code_;
  double magnitude_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonHermitianInput: return "NonHermitianInput";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::NotAKernelVector: return "NotAKernelVector";
    case ErrorCode::FirstOrderNonzero: return "FirstOrderNonzero";
    case ErrorCode::EmptyZeroSet: return "EmptyZeroSet";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::SupportOverlapsZeros: return "SupportOverlapsZeros";
    case ErrorCode::ZeroOperator: return "ZeroOperator";
    case ErrorCode::NotBlockPositive: return "NotBlockPositive";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace ewopt

#endif  // EWOPT_ERROR_HPP
