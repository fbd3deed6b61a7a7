#pragma once

#include <stdexcept>
#include <string>

namespace zlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the requested operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A ball result lost all significant digits (radius exceeds |midpoint|),
/// or an iteration cap was reached before the requested accuracy.
class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

class QuadratureNoConvergence : public Error {
 public:
  using Error::Error;
};

class UnknownIdentity : public Error {
 public:
  using Error::Error;
};

/// Working precision is below the soundness floor of an integer-relation search.
class PrecisionTooLow : public Error {
 public:
  using Error::Error;
};

class InvalidQuery : public Error {
 public:
  using Error::Error;
};

}  // namespace zlab
