#pragma once

// Exact rank-1 solver for the per-BS lower-bound subproblem in the
// one-user-per-cell setting:
//
//   maximize  log2(1 + h^H W h / I) - Tr(A (W - What))
//   over      W PSD, Tr(W) <= budget,
//
// where A is the taxed-interference aggregate (bits scale) and I the
// interference-plus-noise at the expansion point.  Internally the objective
// is scaled by ln2 so the water-filling step takes its textbook form; the
// reported dual multiplier mu_star lives on that natural-log scale.
//
// The fixed-mu solution is closed-form: factor ln2*A + mu*I = L^H L, whiten
// the (rank-1) channel quadratic, water-fill its single eigenvalue, then map
// back.  A bisection on mu enforces the power budget.

#include "cobeam/rates.hpp"

namespace cobeam::lbm {

struct LbmSolution {
  Mat W_star;       // Hermitian PSD, numerical rank <= 1
  double mu_star = 0.0;
  double power_used = 0.0;
  int iterations = 0;  // fixed-mu subproblem evaluations
};

// A_m = sum_{q != m} T_q * h_{m,q} h_{m,q}^H at the expansion point.
// Requires one user per cell.
AggregateMatrix assemble_A(const ChannelSet& channels, const CovSet& covs_hat,
                           int m);

// Elementwise [(d - 1)/d]^+ with the convention 0 -> 0.
std::vector<double> diag_waterfill(const std::vector<double>& delta);

// Closed-form maximizer of the partial Lagrangian at a fixed multiplier.
// mu = 0 is only admissible when the aggregate matrix has full rank
// (otherwise SingularPenalty).
Mat solve_fixed_mu(const ChannelSet& channels, const CovSet& covs_hat, int m,
                   double mu);

// Full solve: tries the unconstrained mu = 0 branch first, otherwise bisects
// mu until |Tr(W) - budget| < bisection_tol * budget; the returned point is
// always taken from the feasible side of the bracket.
LbmSolution solve_lbm(const ChannelSet& channels, const CovSet& covs_hat,
                      int m, double budget, double bisection_tol = 1e-8);

}  // namespace cobeam::lbm
