#pragma once

#include <stdexcept>
#include <string>

namespace hjpath {

/// Base of every error raised by the library. The CLI maps the concrete
/// subclass onto a process exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `position` is a 0-based byte offset into the
/// string handed to the parser (or npos when not applicable).
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position = std::string::npos)
      : Error(position == std::string::npos
                  ? message
                  : message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Lagrangian or request outside the supported class.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent data: initial conditions off the constraint surface,
/// contradictory constraints, unexpected symbolic residuals.
class InconsistentError : public Error {
 public:
  using Error::Error;
};

/// Floating point failure: pole, blow-up, caustic.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Evaluation hit a denominator below the configured epsilon.
class PoleError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Generic-rank sampling disagrees with the symbolic structure.
class RankError : public Error {
 public:
  using Error::Error;
};

}  // namespace hjpath
