#pragma once

#include <stdexcept>
#include <string>

namespace spherefrac {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the arguments was violated (out-of-range angle, bad s, dimension mismatch...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not deliver its contract (quadrature limit, non-finite sample).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The set does not provide a capability that the requested operation needs.
class CapabilityError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace spherefrac
