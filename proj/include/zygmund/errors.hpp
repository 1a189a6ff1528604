#pragma once

#include <stdexcept>
#include <string>

namespace zygmund {

// Base of everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad descriptors, malformed files, invalid parameters.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A computation could not reach its requested accuracy or is undefined.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class DerivativeZero : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SlowConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DivergentTail : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class QuadratureNotConverged : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConstraintViolated : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class EmptySequence : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

}  // namespace zygmund
