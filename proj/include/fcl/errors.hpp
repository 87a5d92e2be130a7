#pragma once

#include <stdexcept>
#include <string>

namespace fcl {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Value outside the range where an inverse map is defined.
class RangeError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A series or iteration failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes or grids of two operands do not match.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Grid too coarse for the requested operator order.
class InsufficientGridError : public ShapeError {
 public:
  using ShapeError::ShapeError;
};

/// Configuration or identifier rejected during validation.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed configuration document.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, int line, int column)
      : std::invalid_argument(what), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_ = 0;
  int column_ = 0;
};

/// Forward solver could not advance a time step.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fcl
