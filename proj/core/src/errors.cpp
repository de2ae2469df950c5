#include "krf/errors.hpp"

namespace krf {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InadmissibleProfile: return "InadmissibleProfile";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::StepRejected: return "StepRejected";
    case ErrorKind::CflViolation: return "CflViolation";
    case ErrorKind::BlowUp: return "BlowUp";
    case ErrorKind::NormalizationViolated: return "NormalizationViolated";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::TailNotResolved: return "TailNotResolved";
    case ErrorKind::WindowUnavailable: return "WindowUnavailable";
    case ErrorKind::WindowTooShort: return "WindowTooShort";
    case ErrorKind::NotSettled: return "NotSettled";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::ValidationError:
      return 2;
    case ErrorKind::IoError:
      return 4;
    default:
      return 3;
  }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

ParseError::ParseError(int line, const std::string& message)
    : Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + message), line_(line) {}

ValidationError::ValidationError(std::string key, const std::string& message)
    : Error(ErrorKind::ValidationError, key + ": " + message), key_(std::move(key)) {}

}  // namespace krf
