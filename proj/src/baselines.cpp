#include "cobeam/baselines.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <string>

namespace cobeam::baselines {

BeamSet matched_filter(const ChannelSet& channels, const NetworkConfig& cfg) {
  BeamSet beams = BeamSet::zeros(channels.M, channels.N, channels.K);
  for (int m = 0; m < channels.M; ++m) {
    const double amp = std::sqrt(cfg.power_budget[static_cast<size_t>(m)] /
                                 channels.N);
    for (int i = 0; i < channels.N; ++i) {
      const Vec& h = channels.chan(m, m, i);
      const double hn = h.norm();
      if (hn == 0.0) {
        throw ZeroChannel("zero direct channel for user " + std::to_string(i) +
                          " of BS " + std::to_string(m));
      }
      beams.beam(m, i) = (amp / hn) * h;
    }
  }
  return beams;
}

BeamSet zero_forcing(const ChannelSet& channels, const NetworkConfig& cfg) {
  if (channels.N > channels.K) {
    throw DimensionError("zero forcing needs at least as many antennas as "
                         "in-cell users");
  }
  BeamSet beams = BeamSet::zeros(channels.M, channels.N, channels.K);
  for (int m = 0; m < channels.M; ++m) {
    Mat C(channels.K, channels.N);  // in-cell channels as columns
    for (int i = 0; i < channels.N; ++i) {
      C.col(i) = channels.chan(m, m, i);
    }
    const Mat G = C.adjoint() * C;
    Eigen::FullPivLU<Mat> lu(G);
    lu.setThreshold(1e-10);
    if (lu.rank() < channels.N) {
      throw RankError("in-cell channel matrix of BS " + std::to_string(m) +
                      " is rank-deficient");
    }
    const Mat P = C * lu.inverse();  // columns: zero-forcing directions
    const double amp = std::sqrt(cfg.power_budget[static_cast<size_t>(m)] /
                                 channels.N);
    for (int i = 0; i < channels.N; ++i) {
      const double pn = P.col(i).norm();
      if (pn == 0.0) {
        throw RankError("degenerate zero-forcing direction");
      }
      beams.beam(m, i) = (amp / pn) * P.col(i);
    }
  }
  return beams;
}

RunTrace run_icbf_variant(const ChannelSet& channels,
                          const NetworkConfig& cfg, const BeamSet& init,
                          std::uint64_t seed) {
  BeamSet beams =
      init.w.empty() ? sbf::random_feasible_beams(cfg, seed) : init;
  check_beams(beams, cfg);

  const int M = cfg.num_coordinated_bs;
  const auto t0 = std::chrono::steady_clock::now();
  RunTrace trace;
  std::vector<double> rate_after;
  rate_after.push_back(sum_rate(channels, beams));

  for (int t = 0; t < cfg.max_outer_iters; ++t) {
    // Every BS computes its candidate from the same previous round.
    std::vector<sbf::Candidate> cands;
    cands.reserve(static_cast<size_t>(M));
    for (int m = 0; m < M; ++m) {
      cands.push_back(sbf::candidate_for_bs(
          channels, beams, m, cfg.power_budget[static_cast<size_t>(m)],
          cfg.icbf_inner_iters - 1, cfg.bisection_tol));
    }
    for (int m = 0; m < M; ++m) {
      for (int i = 0; i < channels.N; ++i) {
        beams.beam(m, i) = cands[static_cast<size_t>(m)]
                               .beams[static_cast<size_t>(i)];
      }
    }
    const double r = sum_rate(channels, beams);

    IterationRecord rec;
    rec.iter = t;
    rec.active_bs = -1;
    rec.sum_rate = r;
    rec.bound = r;  // no surrogate guard in the simultaneous scheme
    rec.info_units = M;
    rec.accepted = true;
    rec.wall_time = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    trace.records.push_back(rec);
    rate_after.push_back(r);

    // Same stopping formula as the sequential loop, indexed by this scheme's
    // own outer iterations.  The window matters here: without the monotone
    // guard the rate can flatten for one round and move again, so a single
    // round of no progress is not evidence of convergence.
    if (t + 1 >= M &&
        std::abs(r - rate_after[static_cast<size_t>(t + 1 - M)]) <
            cfg.stop_tol) {
      trace.converged = true;
      break;
    }
  }

  trace.final_beams = beams;
  trace.final_covs = beams_to_covs(beams);
  trace.final_sum_rate = rate_after.back();
  trace.outer_iterations = static_cast<int>(trace.records.size());
  trace.total_info_units = trace.outer_iterations * M;
  return trace;
}

}  // namespace cobeam::baselines
