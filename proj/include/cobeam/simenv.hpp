#pragma once

// Simulation environment: hexagonal BS layout with a coordinated cluster in
// the middle of a ring of non-coordinating interferers, uniform user drops in
// a per-cell annulus, and Rayleigh channels with distance pathloss plus
// log-normal shadowing.  Per-link receive variance is (d_ref/d)^exponent * L
// with 10*log10(L) ~ Normal(0, std^2); non-coordinating BSs contribute their
// transmit power through the same law to each user's effective noise floor.

#include <cstdint>
#include <vector>

#include "cobeam/model.hpp"

namespace cobeam::simenv {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct PlacementParams {
  int num_coordinated_bs = 4;  // 4 (2x2 cluster) or 9 (3x3 cluster)
  int users_per_cell = 1;
  double inter_site_distance = 2000.0;  // meters
  double user_distance_min = 200.0;
  double user_distance_max = 1000.0;
};

struct FadingParams {
  double pathloss_ref_distance = 200.0;
  double pathloss_exponent = 3.5;
  double shadowing_std_db = 8.0;
  double snr_db = 10.0;         // 10*log10(budget / thermal noise)
  double other_bs_power = 1.0;  // transmit power of non-coordinating BSs

  double thermal_noise(double budget = 1.0) const;
  void validate() const;
};

struct Topology {
  std::vector<Vec2> bs_positions;    // coordinated cluster first, then ring
  std::vector<int> coordinated_set;  // indices into bs_positions
  std::vector<Vec2> user_positions;  // flattened (m,i) order
  double inter_site_distance = 0.0;
  int M = 0, N = 0;
};

// Deterministic in (params, seed).  Cluster cells sit on the hex lattice with
// basis (ISD, 0) and (ISD/2, ISD*sqrt(3)/2); the surrounding ring holds the
// cluster's nearest lattice neighbours (10 of them, giving 14 sites at M=4
// and 19 at M=9).
Topology generate_topology(const PlacementParams& params, std::uint64_t seed);

// Channel draw for all coordinated-BS -> user links plus the aggregated
// interference floor from ring BSs.  antennas = K per BS.
ChannelSet sample_channels(const Topology& topo, const FadingParams& fading,
                           int antennas, std::uint64_t seed);

}  // namespace cobeam::simenv
