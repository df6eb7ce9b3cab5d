#pragma once

#include <stdexcept>
#include <string>

namespace nucad {

/// Base for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (polynomial or SMT-LIB); carries a line/column when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line = 0, int column = 0);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Input that is well-formed but outside the supported fragment.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A polynomial vanished identically where the projection requires it not to.
class NullificationFailure : public Error {
 public:
  using Error::Error;
};

/// The configured step or time budget ran out.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Precondition violation by a caller (bad arguments to an operation).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace nucad
