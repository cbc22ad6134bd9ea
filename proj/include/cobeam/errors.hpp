#pragma once

#include <stdexcept>
#include <string>

namespace cobeam {

// Base class for every error raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid or inconsistent configuration (bad dimensions, nonpositive budgets,
// malformed experiment files).  Carries a human-readable field diagnostic.
struct ConfigError : Error {
  using Error::Error;
};

// Shape mismatch that makes an operation undefined, e.g. zero-forcing with
// more in-cell users than antennas.
struct DimensionError : Error {
  using Error::Error;
};

// A matrix expected to have numerical rank 1 (or full rank for ZF channel
// stacks) does not.
struct RankError : Error {
  using Error::Error;
};

// Penalty-free subproblem requested while the aggregate taxation matrix is
// rank-deficient, so A + 0*I is not invertible.
struct SingularPenalty : Error {
  using Error::Error;
};

// The power-constraint bisection could not bracket or close on the budget.
struct BisectionFailure : Error {
  using Error::Error;
};

// Rank-reduction could not produce a feasible descent direction at a point
// where one must exist.
struct NoDirection : Error {
  using Error::Error;
};

// Curvature probe hit a stencil point where the perturbed covariance left the
// PSD cone.
struct StencilInfeasible : Error {
  using Error::Error;
};

// Iterative solver handed an initial point violating the feasibility set.
struct InfeasibleInit : Error {
  using Error::Error;
};

// A direct channel vector is identically zero, so the matched filter has no
// defined direction.
struct ZeroChannel : Error {
  using Error::Error;
};

// Effective channel through the regularized inverse vanished where the update
// formula needs it positive.
struct DegenerateChannel : Error {
  using Error::Error;
};

// Filesystem-level failure while reading or emitting artifacts.
struct IoError : Error {
  using Error::Error;
};

}  // namespace cobeam
