#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stochmatch {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed graph input. Carries the 1-based line number of the offending line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Exhaustive enumeration requested on an instance above the configured cap.
class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

/// A parameter (R, alpha, depth, threshold, ...) exceeds its guard or underflows.
class ParameterOverflow : public Error {
 public:
  using Error::Error;
};

/// A denominator (1 - Pr[X_v]) fell below the configured floor.
class DivisionGuard : public Error {
 public:
  using Error::Error;
};

/// The hyperwalk conflict graph grew past its node cap.
class ConflictGraphTooLarge : public Error {
 public:
  using Error::Error;
};

}  // namespace stochmatch
