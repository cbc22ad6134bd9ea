#pragma once

// Round-robin coordinated covariance optimization for one user per cell:
// each iteration one BS exactly maximizes its concave per-BS lower bound via
// the closed-form solver, which can only raise the true sum rate (the bound
// is tight at the expansion point and minorizes the rate everywhere).  Stops
// when a full round changes the sum rate by less than stop_tol.

#include <cstdint>

#include "cobeam/lbm.hpp"
#include "cobeam/trace.hpp"

namespace cobeam::ssca {

// Full-power rank-1 covariances with isotropically random directions.
CovSet random_feasible_covs(const NetworkConfig& cfg, std::uint64_t seed);

// Empty init falls back to random_feasible_covs(cfg, seed).
RunTrace run_ssca(const ChannelSet& channels, const NetworkConfig& cfg,
                  const CovSet& init, std::uint64_t seed);

// Stationarity surrogate: the largest per-BS bound improvement any single
// exact re-solve can still achieve.  Zero (up to solver tolerance) exactly at
// KKT points of the sum-rate problem.
double kkt_residual(const ChannelSet& channels, const CovSet& covs,
                    const NetworkConfig& cfg);

}  // namespace cobeam::ssca
