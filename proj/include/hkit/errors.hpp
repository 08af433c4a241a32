#pragma once

#include <stdexcept>
#include <string>

namespace hkit {

// Base of every error raised by the library. Each subclass names one failure
// mode so callers (and the CLI exit-code mapping) can dispatch on type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// [a,b] is not inside the positivity strip of the trigonometric kernel.
class StripViolation : public Error {
 public:
  using Error::Error;
};

class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

class RootFindFailure : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

class NonpositiveInfimum : public Error {
 public:
  using Error::Error;
};

class DivisionByZeroRegion : public Error {
 public:
  using Error::Error;
};

class EnvelopeUnavailable : public Error {
 public:
  using Error::Error;
};

class PositivityRequired : public Error {
 public:
  using Error::Error;
};

class OrderingViolation : public Error {
 public:
  using Error::Error;
};

// One of the structural conditions on the boundary data failed. `condition`
// is the short tag ("C6", "C7", "C8", "C5").
class ConditionViolation : public Error {
 public:
  ConditionViolation(std::string condition, const std::string& what)
      : Error(condition + ": " + what), condition_(std::move(condition)) {}
  const std::string& condition() const noexcept { return condition_; }

 private:
  std::string condition_;
};

// Problem-file or expression syntax error with a 1-based position.
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + what),
        line_(line),
        column_(column),
        message_(what) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  int line_;
  int column_;
  std::string message_;
};

}  // namespace hkit
