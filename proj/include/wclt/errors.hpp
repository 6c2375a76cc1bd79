#pragma once

#include <stdexcept>
#include <string>

namespace wclt {

/// Base class for all library errors. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (pattern files, CSV, kernel dumps, CLI specs).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Configuration is well-formed but degenerate (zero variance, vacuous bound).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Desk-scale cap exceeded (pair census, automorphism brute force, ...).
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Grid alignment precondition of the graph-kernel construction violated.
class AlignmentError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Pattern outside the families handled by the regime bounds.
class UnsupportedPattern : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace wclt
