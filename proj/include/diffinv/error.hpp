#pragma once

#include <stdexcept>
#include <string>

namespace diffinv {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its domain (bad shape, zero inverse, wrong count).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Operands live in different fields or rings.
class FieldMismatch : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Averaging or Brauer lifting was requested for an element or group whose
/// order is divisible by the characteristic.
class ModularError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A series is not a polynomial multiple of the claimed parameter degrees.
class NotFreeError : public DomainError {
 public:
  using DomainError::DomainError;
};

class ParseError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An internal cross-check failed; indicates an engine bug rather than bad input.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace diffinv
