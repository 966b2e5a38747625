#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace critpts {

enum class ErrorCode {
  DimensionMismatch,
  NotSeparable,
  NotSeparableInFeatureSpace,
  NotRealizable,
  IndexOutOfRange,
  EmptyNegatives,
  NoConvergence,
  TooLargeForExhaustive,
  NondeterministicBase,
  SampleTooLarge,
  InconsistentClassifier,
  InvalidDataset,
  InvalidParams,
  ParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotSeparable: return "NotSeparable";
    case ErrorCode::NotSeparableInFeatureSpace: return "NotSeparableInFeatureSpace";
    case ErrorCode::NotRealizable: return "NotRealizable";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::EmptyNegatives: return "EmptyNegatives";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::TooLargeForExhaustive: return "TooLargeForExhaustive";
    case ErrorCode::NondeterministicBase: return "NondeterministicBase";
    case ErrorCode::SampleTooLarge: return "SampleTooLarge";
    case ErrorCode::InconsistentClassifier: return "InconsistentClassifier";
    case ErrorCode::InvalidDataset: return "InvalidDataset";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so the
/// CLI can report it as machine-readable JSON.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace critpts
