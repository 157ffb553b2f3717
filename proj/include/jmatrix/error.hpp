#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace jmatrix {

/// Failure categories reported by the library. Every exception thrown by
/// jmatrix is a jmatrix::Error carrying one of these codes.
enum class ErrorCode {
  ModeMismatch,
  InvalidArgument,
  DegreeBounds,
  NotSymmetrizable,
  SingularGram,
  UnsupportedMultiplePole,
  UnsupportedPoles,
  OutOfDomain,
  RecurrenceBreakdown,
  NotConverged,
  NotSimple,
  HalfIntegerUnsupported,
  InternalConsistency,
  Parse,
};

constexpr std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::ModeMismatch: return "MODE_MISMATCH";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::DegreeBounds: return "DEGREE_BOUNDS";
    case ErrorCode::NotSymmetrizable: return "NOT_SYMMETRIZABLE";
    case ErrorCode::SingularGram: return "SINGULAR_GRAM";
    case ErrorCode::UnsupportedMultiplePole: return "UNSUPPORTED_MULTIPLE_POLE";
    case ErrorCode::UnsupportedPoles: return "UNSUPPORTED_POLES";
    case ErrorCode::OutOfDomain: return "OUT_OF_DOMAIN";
    case ErrorCode::RecurrenceBreakdown: return "RECURRENCE_BREAKDOWN";
    case ErrorCode::NotConverged: return "NOT_CONVERGED";
    case ErrorCode::NotSimple: return "NOT_SIMPLE";
    case ErrorCode::HalfIntegerUnsupported: return "HALF_INTEGER_UNSUPPORTED";
    case ErrorCode::InternalConsistency: return "INTERNAL_CONSISTENCY";
    case ErrorCode::Parse: return "PARSE";
  }
  return "UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Offending index for errors that point at a position in a sequence.
class IndexedError : public Error {
 public:
  IndexedError(ErrorCode code, const std::string& what, long index)
      : Error(code, what + " (index " + std::to_string(index) + ")"), index_(index) {}

  long index() const noexcept { return index_; }

 private:
  long index_;
};

}  // namespace jmatrix
