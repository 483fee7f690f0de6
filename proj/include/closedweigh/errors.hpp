#pragma once

#include <stdexcept>
#include <string>

namespace closedweigh {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition (size mismatch, non-normalized input, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// The operation declines to run because its inputs are outside the regime
/// where it is defined (unstable step, support that does not fit, ...).
class Refusal : public Error {
 public:
  using Error::Error;
};

/// 1 + g(tau) z reached zero or below: the stationary model has no solution.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// A computed result missed its own accuracy contract (norm drift, failed
/// identity check, unconverged grid refinement).
class NumericalContractFailure : public Error {
 public:
  using Error::Error;
};

/// Parameter outside the owning model's invariant range. The message names
/// the violated invariant.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace closedweigh
