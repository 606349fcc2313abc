#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lasercon {

// Every failure raised by the library carries one of these kinds so the CLI
// can report it as machine-readable JSON.
enum class ErrorKind {
  InvalidArgument,
  HyperbolicState,
  RectilinearState,
  RangeViolation,
  UnresolvableBody,
  ZeroBaseline,
  BelowShell,
  WindowAfterTca,
  LimitsExceeded,
  StructureMismatch,
  IoFailure,
  InstanceTooLarge,
  ParseError,
  ValidationError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::HyperbolicState: return "HyperbolicState";
    case ErrorKind::RectilinearState: return "RectilinearState";
    case ErrorKind::RangeViolation: return "RangeViolation";
    case ErrorKind::UnresolvableBody: return "UnresolvableBody";
    case ErrorKind::ZeroBaseline: return "ZeroBaseline";
    case ErrorKind::BelowShell: return "BelowShell";
    case ErrorKind::WindowAfterTca: return "WindowAfterTca";
    case ErrorKind::LimitsExceeded: return "LimitsExceeded";
    case ErrorKind::StructureMismatch: return "StructureMismatch";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace lasercon
