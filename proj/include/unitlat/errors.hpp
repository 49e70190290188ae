#pragma once

#include <stdexcept>
#include <string>

namespace unitlat {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates a documented precondition (bad d, bad precision, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The precision ladder reached its cap without a decision.
class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

/// Square-root membership results match no row of the unit-type table.
class InconsistentClassification : public Error {
 public:
  using Error::Error;
};

/// An inner product is numerically zero but not structurally zero.
class NumericAmbiguity : public Error {
 public:
  using Error::Error;
};

/// Two frame lengths cannot be ordered at the working precision.
class TieBreakFailure : public Error {
 public:
  using Error::Error;
};

/// The field does not satisfy the hypothesis required by a bound.
class HypothesisNotSatisfied : public Error {
 public:
  using Error::Error;
};

}  // namespace unitlat
