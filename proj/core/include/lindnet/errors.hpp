#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace lindnet {

/// Base class for all lindnet errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A NetworkSpec violates its invariants (non-Hermitian hopping, negative
/// rates, bosonic gain >= loss, ...). Message lists every violation.
struct InvalidSpec : Error {
  using Error::Error;
};

/// An operation was called outside its documented preconditions
/// (step-size contract, non-chain topology, parameter domain, ...).
struct ContractViolation : Error {
  using Error::Error;
};

/// Numerical breakdown: eigensolver non-convergence, non-finite values,
/// failed residual or positivity checks.
struct NumericalError : Error {
  using Error::Error;
};

/// A stationary-state solve hit a (numerically) singular generator, e.g.
/// because an exact dark state produces a zero relaxation mode.
struct SingularSystem : NumericalError {
  SingularSystem(const std::string& msg, std::complex<double> eigenvalue)
      : NumericalError(msg), near_zero_eigenvalue(eigenvalue) {}
  std::complex<double> near_zero_eigenvalue;
};

}  // namespace lindnet
