#pragma once

#include <stdexcept>
#include <string>

namespace qzonal {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of the operation
/// (pole of a gamma function, non positive definite matrix, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Floating point breakdown detected by an internal consistency check.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A hypergeometric series hit its degree cap before meeting the layer tolerance.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// A hypergeometric series outside its region of convergence.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace qzonal
