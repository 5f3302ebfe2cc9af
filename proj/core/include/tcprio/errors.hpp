#pragma once

#include <stdexcept>
#include <string>

namespace tcprio {

/// Base of every error raised by the library. `kind()` is a stable,
/// machine-readable tag used by the CLI error line.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

/// Unknown names, out-of-range settings, mismatched inputs.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message) : Error("config", message) {}
};

/// A dataset violates a structural constraint (duplicates, unknown tests,
/// negative durations).
class IntegrityError : public Error {
 public:
  explicit IntegrityError(const std::string& message)
      : Error("integrity", message) {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error("parse", "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Training produced a non-finite loss; the caller should lower the
/// learning rate.
class DivergenceError : public Error {
 public:
  explicit DivergenceError(const std::string& message)
      : Error("divergence", message) {}
};

/// Precondition violated by the caller (empty batch, too few points, ...).
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& message)
      : Error("invalid_argument", message) {}
};

}  // namespace tcprio
