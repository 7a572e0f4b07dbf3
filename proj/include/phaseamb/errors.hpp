#pragma once

#include <stdexcept>
#include <string>

namespace phaseamb {

// Base class for domain-level failures (as opposed to bad arguments or I/O,
// which surface as std::invalid_argument / std::runtime_error from callers).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Root finding did not reach the residual tolerance after the retry policy.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

// Roots could not be grouped into reflection pairs / conjugate units. Either
// the computation broke down numerically or the input is not a valid
// autocorrelation.
class PairingFailure : public Error {
 public:
  using Error::Error;
};

// An expansion that must be real carries an imaginary residue above tol-real,
// i.e. the zero multiset is not conjugate-closed within noise.
class RealnessViolation : public Error {
 public:
  using Error::Error;
};

// A geometric construction was invoked outside its hypothesis (e.g. a fixed
// zero with non-negative real part).
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

// An instance generator exhausted its retry budget.
class GenerationFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace phaseamb
