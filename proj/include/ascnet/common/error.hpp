#pragma once

#include <stdexcept>
#include <string>

namespace ascnet {

// Base of every error thrown by the library. The CLI maps the subclasses
// onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad invocation or configuration (exit code 1).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Malformed or out-of-domain input data (exit code 2).
class DataError : public Error {
 public:
  using Error::Error;
};

// Tensor shapes that do not conform for an operation.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Undefined or non-finite numerical result (exit code 3).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace ascnet
