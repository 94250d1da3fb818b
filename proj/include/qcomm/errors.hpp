#pragma once

#include <stdexcept>
#include <string>

namespace qcomm {

// Base for every error raised by the library. The CLI maps subclasses onto
// exit codes, so new error kinds should derive from one of these.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: shapes that do not compose, non-unitary operators,
// invalid qubit indices and the like.
class DimensionError : public Error {
 public:
  using Error::Error;
};

class NotUnitaryError : public Error {
 public:
  using Error::Error;
};

// Dense storage would exceed the configured qubit cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

// A protocol violates the communication model (ownership, conditioning,
// Schmidt coefficients, output placement).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A numerical invariant that should hold by construction failed. Seeing one
// of these means an implementation bug.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace qcomm
