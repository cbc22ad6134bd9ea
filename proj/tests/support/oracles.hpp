#pragma once

// Independent reference implementations the tests compare the library
// against: entrywise double loops for the rate stack, straight-from-the-
// definition taxation, a projected-gradient solver for the relaxed per-BS
// subproblem, and exhaustive grids for tiny cases.  None of these share the
// library's computational paths (kernel layer, Cholesky whitening,
// closed-form water-filling), so agreement carries evidence.

#include "cobeam/model.hpp"
#include "cobeam/rng.hpp"

namespace oracle {

using cobeam::ChannelSet;
using cobeam::CovSet;
using cobeam::Mat;
using cobeam::NetworkConfig;
using cobeam::Rng;
using cobeam::Vec;

// Entrywise-loop rate stack (Tr(HW) route, no kernels).
double loop_interference(const ChannelSet& ch, const CovSet& covs, int m,
                         int i);
double loop_user_rate(const ChannelSet& ch, const CovSet& covs, int m, int i);
double loop_sum_rate(const ChannelSet& ch, const CovSet& covs);
double loop_tax(const ChannelSet& ch, const CovSet& covs_hat, int q, int j);

// Random well-conditioned instances: unit-variance channels, noise in
// [0.3, 3], unit power budgets.
ChannelSet random_channels(int M, int N, int K, Rng& rng);
NetworkConfig config_for(const ChannelSet& ch);
CovSet random_rank1_covs(const ChannelSet& ch, const NetworkConfig& cfg,
                         Rng& rng);
Mat random_psd(int K, int rank, double trace, Rng& rng);
Mat random_hermitian(int K, Rng& rng);  // unit Frobenius norm

// The mu-free surrogate each per-BS solver route maximizes (single user per
// cell, constants dropped): log2(1 + h^H W h / I) - Tr(A W), with A the
// taxed-channel aggregate built from loop_tax.
Mat loop_aggregate(const ChannelSet& ch, const CovSet& covs_hat, int m);
double bound_objective(const ChannelSet& ch, const CovSet& covs_hat, int m,
                       const Mat& W);

// Projected gradient ascent over {W PSD, Tr W <= budget}: eigenvalue clamp
// plus simplex projection for the exact feasible-set projection, Armijo
// backtracking line search.
struct PgResult {
  Mat W;
  double objective = 0.0;
  int iterations = 0;
};
PgResult projected_gradient_rlbm(const ChannelSet& ch, const CovSet& covs_hat,
                                 int m, double budget, int max_iters = 4000);

// K=2 exhaustive direction grid (polar angle x relative phase at the given
// radian resolution) with the closed-form optimal transmit power for each
// direction; returns the best surrogate objective found.
double grid_lbm_objective_k2(const ChannelSet& ch, const CovSet& covs_hat,
                             int m, double budget, double resolution = 1e-3);

// M=2, K=1 exhaustive power grid; returns the best sum rate.
double grid_sum_rate_m2k1(const ChannelSet& ch, double budget,
                          double resolution = 1e-3);

}  // namespace oracle
