#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dsqif {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed frames, tuples, or variable subsets.
class FrameError : public Error {
 public:
  using Error::Error;
};

// A mass assignment that violates the mass-function axioms.
class MassError : public Error {
 public:
  using Error::Error;
};

// Every focal pair combines to the empty set; Dempster's k is undefined.
class TotalConflictError : public Error {
 public:
  using Error::Error;
};

// A loop still carries mass after the iteration budget.
class NonTerminationError : public Error {
 public:
  using Error::Error;
};

// Runtime failure while evaluating an expression.
class EvalError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace dsqif
