#pragma once

// Multi-user-per-cell sequential beamforming.  Each round one BS rebuilds all
// of its beams from the closed-form stationarity identity
//   w_{m,i} = beta_{m,i}(mu) * M_{m,i}(mu, w_hat)^+ h_{m,(m,i)},
// where M aggregates every other user's taxed channel outer product plus the
// power multiplier, and beta scales the direction so the identity closes.
// All taxation terms are evaluated at the previous round's beams (one Jacobi
// pass; the identity is implicit in the new beams otherwise).  A per-BS bound
// comparison accepts or rejects the candidate, which is what makes the sum
// rate nondecreasing without any inner iteration.

#include <cstdint>
#include <vector>

#include "cobeam/rates.hpp"
#include "cobeam/trace.hpp"

namespace cobeam::sbf {

struct BsUpdateResult {
  std::vector<Vec> beams;  // BS m's beams after the update (candidate or old)
  double mu = 0.0;
  double bound_before = 0.0;
  double bound_after = 0.0;  // per-BS bound of the candidate
  bool accepted = false;
};

// In-cell taxation terms T_{m,l}(w_m, w_hat_others): own-cell signal and
// interference use the supplied beams w_m, other cells stay at w_hat.
// Coincides with the global taxation table when w_m equals w_hat's cell m.
std::vector<double> intra_tax(const ChannelSet& channels,
                              const std::vector<Vec>& w_m,
                              const BeamSet& w_hat, int m);

// ln2 * (sum_{(q,j) != (m,i)} T_{q,j}(w_hat) h_{m,(q,j)} h_{m,(q,j)}^H + mu I).
Mat build_M(const ChannelSet& channels, double mu, const BeamSet& w_hat,
            int m, int i);

// beta = sqrt([h^H M^+ h - I_{m,i}]^+ ) / (h^H M^+ h); zero switches the user
// off for this round.
double beta(const ChannelSet& channels, double mu, const BeamSet& w_hat,
            int m, int i);

// Candidate beams for one BS at the power-feasible multiplier.  inner_sweeps
// re-evaluates in-cell taxes/interference at the running candidate before
// re-bisecting (0 = single Jacobi pass).
struct Candidate {
  std::vector<Vec> beams;
  double mu = 0.0;
};
Candidate candidate_for_bs(const ChannelSet& channels, const BeamSet& w_hat,
                           int m, double budget, int inner_sweeps,
                           double bisection_tol);

// Candidate + bound comparison (acceptance guard).
BsUpdateResult update_bs(const ChannelSet& channels, const BeamSet& w_hat,
                         int m, double budget, const NetworkConfig& cfg);

// ||M w - H w / (I + w^H H w)|| / ||M w|| for an accepted beam; zero for a
// switched-off user (its optimality condition is the boundary inequality).
double fixed_point_residual(const ChannelSet& channels, const BeamSet& w_hat,
                            const Vec& w_new, double mu, int m, int i);

// Equal-power random beams, norm sqrt(budget / N) each.
BeamSet random_feasible_beams(const NetworkConfig& cfg, std::uint64_t seed);

// Round-robin outer loop; empty init falls back to random_feasible_beams.
RunTrace run_sbf(const ChannelSet& channels, const NetworkConfig& cfg,
                 const BeamSet& init, std::uint64_t seed);

}  // namespace cobeam::sbf
