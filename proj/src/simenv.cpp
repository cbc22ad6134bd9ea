#include "cobeam/simenv.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "cobeam/rng.hpp"

namespace cobeam::simenv {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

using Cell = std::pair<int, int>;  // hex lattice coordinates (a, b)

// Compact cluster shapes; 4 and 9 reproduce the 2x2 / 3x3 layouts, other
// sizes take a reasonable prefix for completeness.
std::vector<Cell> cluster_cells(int M) {
  switch (M) {
    case 1:
      return {{0, 0}};
    case 2:
      return {{0, 0}, {1, 0}};
    case 3:
      return {{0, 0}, {1, 0}, {0, 1}};
    case 4:
      return {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    default: {
      std::vector<Cell> all = {{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1},
                               {2, 1}, {0, 2}, {1, 2}, {2, 2}};
      if (M > static_cast<int>(all.size())) {
        throw ConfigError("coordinated cluster supports at most 9 BSs");
      }
      all.resize(static_cast<size_t>(M));
      return all;
    }
  }
}

Vec2 cell_position(const Cell& c, double isd) {
  const double a = static_cast<double>(c.first);
  const double b = static_cast<double>(c.second);
  return {isd * (a + 0.5 * b), isd * b * 0.8660254037844386467637231708};
}

double dist(const Vec2& p, const Vec2& q) {
  return std::hypot(p.x - q.x, p.y - q.y);
}

}  // namespace

double FadingParams::thermal_noise(double budget) const {
  return budget * std::pow(10.0, -snr_db / 10.0);
}

void FadingParams::validate() const {
  if (!(pathloss_ref_distance > 0.0)) {
    throw ConfigError("pathloss_ref_distance must be > 0");
  }
  if (!(pathloss_exponent > 2.0)) {
    throw ConfigError("pathloss_exponent must be > 2");
  }
  if (!(shadowing_std_db >= 0.0)) {
    throw ConfigError("shadowing_std_db must be >= 0");
  }
  if (!(other_bs_power >= 0.0)) {
    throw ConfigError("other_bs_power must be >= 0");
  }
}

Topology generate_topology(const PlacementParams& params, std::uint64_t seed) {
  if (params.num_coordinated_bs < 1 || params.users_per_cell < 1) {
    throw ConfigError("topology needs at least one BS and one user per cell");
  }
  if (!(params.inter_site_distance > 0.0)) {
    throw ConfigError("inter_site_distance must be > 0");
  }
  if (!(params.user_distance_min > 0.0) ||
      params.user_distance_max < params.user_distance_min) {
    throw ConfigError("user distance annulus is empty or degenerate");
  }

  const std::vector<Cell> block = cluster_cells(params.num_coordinated_bs);
  const std::set<Cell> block_set(block.begin(), block.end());

  // Ring: every lattice neighbour of a cluster cell outside the cluster.
  static const Cell kNbr[6] = {{1, 0}, {-1, 0}, {0, 1},
                               {0, -1}, {1, -1}, {-1, 1}};
  std::set<Cell> ring_set;
  for (const Cell& c : block) {
    for (const Cell& d : kNbr) {
      const Cell n{c.first + d.first, c.second + d.second};
      if (!block_set.count(n)) {
        ring_set.insert(n);
      }
    }
  }
  std::vector<Cell> ring(ring_set.begin(), ring_set.end());

  // The 3x3 cluster's full neighbour ring has 14 cells; the reference layout
  // uses 19 sites total, so keep the 10 closest to the cluster centroid.
  if (params.num_coordinated_bs == 9 && ring.size() > 10) {
    Vec2 centroid{0.0, 0.0};
    for (const Cell& c : block) {
      const Vec2 p = cell_position(c, params.inter_site_distance);
      centroid.x += p.x / static_cast<double>(block.size());
      centroid.y += p.y / static_cast<double>(block.size());
    }
    std::stable_sort(ring.begin(), ring.end(),
                     [&](const Cell& a, const Cell& b) {
                       const double da = dist(
                           cell_position(a, params.inter_site_distance),
                           centroid);
                       const double db = dist(
                           cell_position(b, params.inter_site_distance),
                           centroid);
                       return da < db;
                     });
    ring.resize(10);
    std::sort(ring.begin(), ring.end());
  }

  Topology topo;
  topo.M = params.num_coordinated_bs;
  topo.N = params.users_per_cell;
  topo.inter_site_distance = params.inter_site_distance;
  for (const Cell& c : block) {
    topo.coordinated_set.push_back(static_cast<int>(topo.bs_positions.size()));
    topo.bs_positions.push_back(
        cell_position(c, params.inter_site_distance));
  }
  for (const Cell& c : ring) {
    topo.bs_positions.push_back(
        cell_position(c, params.inter_site_distance));
  }

  Rng rng(Rng::derive(seed, 0x746f706fULL));
  for (int m = 0; m < topo.M; ++m) {
    const Vec2& bs =
        topo.bs_positions[static_cast<size_t>(topo.coordinated_set[
            static_cast<size_t>(m)])];
    for (int i = 0; i < topo.N; ++i) {
      const double d =
          rng.uniform(params.user_distance_min, params.user_distance_max);
      const double ang = rng.uniform(0.0, kTwoPi);
      topo.user_positions.push_back(
          {bs.x + d * std::cos(ang), bs.y + d * std::sin(ang)});
    }
  }
  return topo;
}

ChannelSet sample_channels(const Topology& topo, const FadingParams& fading,
                           int antennas, std::uint64_t seed) {
  fading.validate();
  if (antennas < 1) {
    throw ConfigError("antennas must be >= 1");
  }
  ChannelSet ch = ChannelSet::zeros(topo.M, topo.N, antennas);
  Rng rng(Rng::derive(seed, 0x6368616eULL));

  const auto link_variance = [&](const Vec2& bs, const Vec2& user) {
    const double d = std::max(dist(bs, user), 1e-6);
    const double shadow_db = fading.shadowing_std_db * rng.normal();
    const double L = std::pow(10.0, shadow_db / 10.0);
    return std::pow(fading.pathloss_ref_distance / d,
                    fading.pathloss_exponent) *
           L;
  };

  // Coordinated links first, in (transmitter, user) order.
  for (int q = 0; q < topo.M; ++q) {
    const Vec2& bs = topo.bs_positions[static_cast<size_t>(
        topo.coordinated_set[static_cast<size_t>(q)])];
    for (int m = 0; m < topo.M; ++m) {
      for (int i = 0; i < topo.N; ++i) {
        const Vec2& user =
            topo.user_positions[static_cast<size_t>(m * topo.N + i)];
        ch.chan(q, m, i) =
            rng.cnormal_vec(antennas, link_variance(bs, user));
      }
    }
  }

  // Effective noise: thermal floor (power budget normalized to 1) plus the
  // average received power from every non-coordinating site.
  const double sigma2 = fading.thermal_noise(1.0);
  std::vector<size_t> ring_bs;
  for (size_t b = 0; b < topo.bs_positions.size(); ++b) {
    if (std::find(topo.coordinated_set.begin(), topo.coordinated_set.end(),
                  static_cast<int>(b)) == topo.coordinated_set.end()) {
      ring_bs.push_back(b);
    }
  }
  for (int m = 0; m < topo.M; ++m) {
    for (int i = 0; i < topo.N; ++i) {
      const Vec2& user =
          topo.user_positions[static_cast<size_t>(m * topo.N + i)];
      double c = sigma2;
      for (const size_t b : ring_bs) {
        c += fading.other_bs_power *
             link_variance(topo.bs_positions[b], user);
      }
      ch.noise_power[static_cast<size_t>(m * topo.N + i)] = c;
    }
  }
  return ch;
}

}  // namespace cobeam::simenv
