#pragma once

#include <stdexcept>
#include <string>

namespace rmzeta {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape mismatch between operands (non-square input, wrong vector length, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Input outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// 1 - A (or a similar shifted operator) is not invertible.
class SingularityError : public Error {
 public:
  using Error::Error;
};

// A power series was asked to be summed outside its disk of convergence.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// An iterative kernel did not converge or produced non-finite values.
class NumericError : public Error {
 public:
  using Error::Error;
};

// A configured size or work budget would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent configuration input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace rmzeta
