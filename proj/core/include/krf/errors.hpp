#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace krf {

enum class ErrorKind {
  InadmissibleProfile,
  GridMismatch,
  StepRejected,
  CflViolation,
  BlowUp,
  NormalizationViolated,
  NoConvergence,
  TailNotResolved,
  WindowUnavailable,
  WindowTooShort,
  NotSettled,
  ParseError,
  ValidationError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

/// Process exit code the CLI maps an error to: 2 config, 3 numerical, 4 I/O.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& message);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string key, const std::string& message);
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace krf
