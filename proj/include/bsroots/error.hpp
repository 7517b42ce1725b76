#pragma once

#include <stdexcept>
#include <string>

namespace bsroots {

enum class ErrorCode {
  SyntaxError,
  NotHomogeneous,
  ZeroPolynomial,
  NotIsolated,
  NotStabilized,
  NegativeNu,
  NegativeSplit,
  NotPolynomial,
  NonIntegerMilnor,
  UnknownType,
  NotWeightedHomogeneous,
  NotApplicable,
  ChiMismatch,
  WViolation,
  InvalidInput,
  InvariantFailure,
};

inline const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::NotHomogeneous: return "NotHomogeneous";
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::NotIsolated: return "NotIsolated";
    case ErrorCode::NotStabilized: return "NotStabilized";
    case ErrorCode::NegativeNu: return "NegativeNu";
    case ErrorCode::NegativeSplit: return "NegativeSplit";
    case ErrorCode::NotPolynomial: return "NotPolynomial";
    case ErrorCode::NonIntegerMilnor: return "NonIntegerMilnor";
    case ErrorCode::UnknownType: return "UnknownType";
    case ErrorCode::NotWeightedHomogeneous: return "NotWeightedHomogeneous";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::ChiMismatch: return "ChiMismatch";
    case ErrorCode::WViolation: return "WViolation";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::InvariantFailure: return "InvariantFailure";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

  // Errors that indicate broken arithmetic invariants rather than bad input.
  bool is_internal() const {
    return code_ == ErrorCode::NegativeNu || code_ == ErrorCode::NegativeSplit ||
           code_ == ErrorCode::ChiMismatch || code_ == ErrorCode::InvariantFailure ||
           code_ == ErrorCode::NotStabilized;
  }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace bsroots
