#pragma once

// Rate, interference, taxation and surrogate lower-bound formulas.  All rates
// are in bits/s/Hz (log base 2); taxation terms carry the 1/ln2 factor that
// converts the interference derivative to that base.

#include <utility>
#include <vector>

#include "cobeam/model.hpp"

namespace cobeam {

// Per-user price of interference: T[(q,j)] = (1/ln2) * s / ((I+s) * I) with
// s the user's own received signal power and I its interference-plus-noise,
// both at the expansion point held in evaluated_at.
struct TaxationTable {
  int M = 0, N = 0;
  std::vector<double> T;  // flattened user order, entries >= 0
  CovSet evaluated_at;

  double tax(int q, int j) const { return T[static_cast<size_t>(q * N + j)]; }
};

// Aggregate taxed-interference matrix for one BS in the single-user-per-cell
// setting: A_m = sum_{q != m} T_q * h_{m,q} h_{m,q}^H (Hermitian PSD).
struct AggregateMatrix {
  Mat A;
};

// I_{m,i} = c_{m,i} + sum over all other users' covariances of h^H W h,
// where h is the channel from the interfering BS to user (m,i).
double interference(const ChannelSet& channels, const CovSet& covs, int m,
                    int i);
double interference(const ChannelSet& channels, const BeamSet& beams, int m,
                    int i);

// log2(1 + h^H W_{m,i} h / I_{m,i}).
double user_rate(const ChannelSet& channels, const CovSet& covs, int m, int i);
double user_rate(const ChannelSet& channels, const BeamSet& beams, int m,
                 int i);

// Weighted sum of user rates; empty weights mean all ones.
double sum_rate(const ChannelSet& channels, const CovSet& covs,
                const std::vector<double>& weights = {});
double sum_rate(const ChannelSet& channels, const BeamSet& beams,
                const std::vector<double>& weights = {});

TaxationTable taxation(const ChannelSet& channels, const CovSet& covs_hat);

// Tangent-plane lower bound on the sum rate as a function of one user's
// covariance, everything else frozen at covs_hat:
//   U_{m,i}(W) = R_{m,i}(W, What) + sum of other users' rates at What
//              - sum_{(q,j)!=(m,i)} T_{q,j} * h_{m,(q,j)}^H (W - What_{m,i}) h_{m,(q,j)}.
// U <= sum rate with W substituted, with equality at W = What_{m,i}.
double per_user_bound(const ChannelSet& channels, const Mat& W_mi,
                      const CovSet& covs_hat, int m, int i);

// Per-BS variant: the block W_m of all of BS m's covariances varies jointly.
// In-cell cross interference is kept exact; only other-cell interference is
// linearized through the taxation terms.
double per_bs_bound(const ChannelSet& channels, const std::vector<Mat>& W_m,
                    const CovSet& covs_hat, int m);

// Central second difference of user (m,i)'s rate along a Hermitian direction
// applied to the varied user's covariance.  Throws StencilInfeasible when a
// stencil endpoint leaves the PSD cone.  Probes the curvature structure:
// convex in other users' covariances, concave in the user's own.
double directional_second_derivative(const ChannelSet& channels,
                                     const CovSet& covs,
                                     std::pair<int, int> target_user,
                                     std::pair<int, int> varied_user,
                                     const Mat& direction, double step);

}  // namespace cobeam
