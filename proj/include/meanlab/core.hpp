#pragma once

#include <stdexcept>
#include <string>

namespace meanlab {

struct MeanlabError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : MeanlabError {
  using MeanlabError::MeanlabError;
};

// An eigenvalue falls outside the domain of the requested matrix function
// (non-PD input to sqrt/power/inverse, near-singular inverse, ...).
struct DomainError : MeanlabError {
  using MeanlabError::MeanlabError;
};

// Eigensolver failed to reach its residual target within max_sweeps.
struct NoConvergence : MeanlabError {
  using MeanlabError::MeanlabError;
};

// A truncated series did not reach its residual target within max_terms.
struct NotConverged : MeanlabError {
  using MeanlabError::MeanlabError;
};

struct PreconditionError : MeanlabError {
  using MeanlabError::MeanlabError;
};

struct EmptyInput : MeanlabError {
  using MeanlabError::MeanlabError;
};

// Invalid ensemble specification (matrix_gen).
struct SpecError : MeanlabError {
  using MeanlabError::MeanlabError;
};

// Invalid experiment configuration.
struct ConfigError : MeanlabError {
  using MeanlabError::MeanlabError;
};

// Numerical slacks shared across the library.
//
// psd_slack: absolute slack on minimum eigenvalues in Loewner/PSD checks.
// residual:  relative residual target for the eigensolver.
// max_sweeps: Jacobi sweep budget.
struct Tolerance {
  double psd_slack = 1e-10;
  double residual = 1e-12;
  int max_sweeps = 64;
};

}  // namespace meanlab
