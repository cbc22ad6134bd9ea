#include "cobeam/sbf.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>

#include "cobeam/rng.hpp"
#include "cobeam/simd/kernels.hpp"

namespace cobeam::sbf {

namespace {

constexpr double kLn2 = 0.693147180559945309417232121458;
constexpr double kPinvRelTol = 1e-12;

double beam_gain(const Vec& h, const Vec& w) {
  return std::norm(
      simd::cdotc(static_cast<std::size_t>(h.size()), h.data(), w.data()));
}

// Pseudoinverse application x = M^+ h for Hermitian PSD M, plus the effective
// gain g = Re(h^H x) and the fraction of h outside M's range.  A positive
// range defect means the unpenalized subproblem is unbounded, so mu = 0 must
// not be accepted.
struct PinvApply {
  Vec x;
  double g = 0.0;
  double range_defect = 0.0;
};

PinvApply pinv_apply(const Mat& M, const Vec& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrized(M));
  const auto& ev = es.eigenvalues();
  const Eigen::Index K = M.rows();
  const double thr = kPinvRelTol * std::max(std::abs(ev(0)), ev(K - 1));
  PinvApply out;
  out.x = Vec::Zero(K);
  Vec proj = Vec::Zero(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    if (ev(k) > thr && ev(k) > 0.0) {
      const cxd c = es.eigenvectors().col(k).dot(h);  // v^H h
      out.x += (c / ev(k)) * es.eigenvectors().col(k);
      proj += c * es.eigenvectors().col(k);
    }
  }
  out.g = std::max(0.0, (h.adjoint() * out.x)(0).real());
  const double hn = h.norm();
  out.range_defect = hn > 0.0 ? (h - proj).norm() / hn : 0.0;
  return out;
}

// Everything about one BS's subproblem that does not change with mu or the
// inner sweeps: the other-cell taxed aggregate and the in-cell channels.
struct BsContext {
  int m = 0;
  int N = 0;
  Mat A_inter;               // ln2-scaled, shared by all of the BS's users
  std::vector<Vec> h_own;    // h_{m,(m,i)}
  std::vector<Vec> h_intra;  // h_{m,(m,l)} as interference sources (same set)
  double budget = 0.0;
};

BsContext make_context(const ChannelSet& channels, const BeamSet& w_hat,
                       int m, double budget) {
  BsContext ctx;
  ctx.m = m;
  ctx.N = channels.N;
  ctx.budget = budget;
  const std::size_t K = static_cast<std::size_t>(channels.K);
  const CovSet covs_hat = beams_to_covs(w_hat);
  const TaxationTable tab = taxation(channels, covs_hat);
  Mat A = Mat::Zero(channels.K, channels.K);
  for (int q = 0; q < channels.M; ++q) {
    if (q == m) {
      continue;
    }
    for (int j = 0; j < channels.N; ++j) {
      const Vec& h = channels.chan(m, q, j);
      simd::rank1_accum(K, kLn2 * tab.tax(q, j), h.data(), A.data(), K);
    }
  }
  ctx.A_inter = symmetrized(A);
  for (int i = 0; i < channels.N; ++i) {
    ctx.h_own.push_back(channels.chan(m, m, i));
    ctx.h_intra.push_back(channels.chan(m, m, i));
  }
  return ctx;
}

struct SweepState {
  std::vector<double> t_intra;  // in-cell taxation terms
  std::vector<double> inter;    // I_{m,i} at the evaluation beams
};

// Candidate beams at one multiplier given frozen taxes/interference.
struct FixedMuBeams {
  std::vector<Vec> w;
  double power = 0.0;
  bool zero_mu_ok = true;  // every user's channel inside its M's range
};

FixedMuBeams beams_at_mu(const BsContext& ctx, const SweepState& st,
                         double mu) {
  const Eigen::Index K = ctx.h_own[0].size();
  const std::size_t Ku = static_cast<std::size_t>(K);
  FixedMuBeams out;
  out.w.resize(static_cast<size_t>(ctx.N));
  for (int i = 0; i < ctx.N; ++i) {
    Mat M = ctx.A_inter;
    for (int l = 0; l < ctx.N; ++l) {
      if (l == i) {
        continue;
      }
      simd::rank1_accum(Ku, kLn2 * st.t_intra[static_cast<size_t>(l)],
                        ctx.h_intra[static_cast<size_t>(l)].data(), M.data(),
                        Ku);
    }
    M.diagonal().array() += kLn2 * mu;
    const PinvApply pa = pinv_apply(M, ctx.h_own[static_cast<size_t>(i)]);
    if (pa.range_defect > 1e-10) {
      out.zero_mu_ok = false;
    }
    const double bracket = pa.g - st.inter[static_cast<size_t>(i)];
    if (bracket > 0.0 && pa.g > 0.0) {
      out.w[static_cast<size_t>(i)] = (std::sqrt(bracket) / pa.g) * pa.x;
      out.power += out.w[static_cast<size_t>(i)].squaredNorm();
    } else {
      if (pa.g <= 0.0 && bracket > 0.0) {
        throw DegenerateChannel("positive bracket with zero effective gain");
      }
      out.w[static_cast<size_t>(i)] = Vec::Zero(K);
    }
  }
  return out;
}

Candidate bisect_mu(const BsContext& ctx, const SweepState& st,
                    double bisection_tol) {
  const FixedMuBeams at0 = beams_at_mu(ctx, st, 0.0);
  if (at0.zero_mu_ok && at0.power <= ctx.budget) {
    return {at0.w, 0.0};
  }

  const double tol = bisection_tol * ctx.budget;
  double mu_lo = 0.0;
  double mu_hi = 1.0;
  FixedMuBeams hi = beams_at_mu(ctx, st, mu_hi);
  for (int tries = 0; hi.power > ctx.budget; ++tries) {
    mu_lo = mu_hi;
    mu_hi *= 2.0;
    hi = beams_at_mu(ctx, st, mu_hi);
    if (tries > 200) {
      throw BisectionFailure("could not bracket the beam power multiplier");
    }
  }
  while (std::abs(hi.power - ctx.budget) >= tol &&
         mu_hi - mu_lo > 1e-12 * std::max(1.0, mu_hi)) {
    const double mid = 0.5 * (mu_lo + mu_hi);
    const FixedMuBeams at_mid = beams_at_mu(ctx, st, mid);
    if (at_mid.power > ctx.budget) {
      mu_lo = mid;
    } else {
      mu_hi = mid;
      hi = at_mid;
    }
  }
  return {hi.w, mu_hi};
}

}  // namespace

std::vector<double> intra_tax(const ChannelSet& channels,
                              const std::vector<Vec>& w_m,
                              const BeamSet& w_hat, int m) {
  std::vector<double> out(static_cast<size_t>(channels.N), 0.0);
  for (int l = 0; l < channels.N; ++l) {
    const Vec& h = channels.chan(m, m, l);
    const double s = beam_gain(h, w_m[static_cast<size_t>(l)]);
    double inter = channels.noise(m, l);
    for (int q = 0; q < channels.M; ++q) {
      const Vec& hq = channels.chan(q, m, l);
      for (int j = 0; j < channels.N; ++j) {
        if (q == m && j == l) {
          continue;
        }
        inter += beam_gain(hq, q == m ? w_m[static_cast<size_t>(j)]
                                      : w_hat.beam(q, j));
      }
    }
    out[static_cast<size_t>(l)] = s / (kLn2 * (inter + s) * inter);
  }
  return out;
}

Mat build_M(const ChannelSet& channels, double mu, const BeamSet& w_hat,
            int m, int i) {
  const CovSet covs_hat = beams_to_covs(w_hat);
  const TaxationTable tab = taxation(channels, covs_hat);
  const std::size_t K = static_cast<std::size_t>(channels.K);
  Mat M = Mat::Zero(channels.K, channels.K);
  for (int q = 0; q < channels.M; ++q) {
    for (int j = 0; j < channels.N; ++j) {
      if (q == m && j == i) {
        continue;
      }
      const Vec& h = channels.chan(m, q, j);
      simd::rank1_accum(K, kLn2 * tab.tax(q, j), h.data(), M.data(), K);
    }
  }
  M.diagonal().array() += kLn2 * mu;
  return symmetrized(M);
}

double beta(const ChannelSet& channels, double mu, const BeamSet& w_hat,
            int m, int i) {
  const Mat M = build_M(channels, mu, w_hat, m, i);
  const PinvApply pa = pinv_apply(M, channels.chan(m, m, i));
  const double inter = interference(channels, w_hat, m, i);
  const double bracket = pa.g - inter;
  if (bracket <= 0.0) {
    return 0.0;
  }
  if (pa.g <= 0.0) {
    throw DegenerateChannel("positive bracket with zero effective gain");
  }
  return std::sqrt(bracket) / pa.g;
}

Candidate candidate_for_bs(const ChannelSet& channels, const BeamSet& w_hat,
                           int m, double budget, int inner_sweeps,
                           double bisection_tol) {
  const BsContext ctx = make_context(channels, w_hat, m, budget);

  SweepState st;
  st.t_intra.resize(static_cast<size_t>(channels.N));
  st.inter.resize(static_cast<size_t>(channels.N));
  std::vector<Vec> eval_beams;  // own-cell beams the taxes are evaluated at
  for (int i = 0; i < channels.N; ++i) {
    eval_beams.push_back(w_hat.beam(m, i));
  }

  Candidate cand;
  for (int sweep = 0; sweep <= inner_sweeps; ++sweep) {
    const std::vector<double> t = intra_tax(channels, eval_beams, w_hat, m);
    BeamSet mixed = w_hat;
    for (int i = 0; i < channels.N; ++i) {
      mixed.beam(m, i) = eval_beams[static_cast<size_t>(i)];
    }
    for (int i = 0; i < channels.N; ++i) {
      st.t_intra[static_cast<size_t>(i)] = t[static_cast<size_t>(i)];
      st.inter[static_cast<size_t>(i)] = interference(channels, mixed, m, i);
    }
    cand = bisect_mu(ctx, st, bisection_tol);
    eval_beams = cand.beams;
  }
  return cand;
}

BsUpdateResult update_bs(const ChannelSet& channels, const BeamSet& w_hat,
                         int m, double budget, const NetworkConfig& cfg) {
  const CovSet covs_hat = beams_to_covs(w_hat);
  std::vector<Mat> old_block, new_block;
  for (int i = 0; i < channels.N; ++i) {
    old_block.push_back(covs_hat.cov(m, i));
  }

  const Candidate cand = candidate_for_bs(channels, w_hat, m, budget,
                                          cfg.sbf_inner_sweeps,
                                          cfg.bisection_tol);
  for (const Vec& w : cand.beams) {
    new_block.push_back(w * w.adjoint());
  }

  BsUpdateResult res;
  res.mu = cand.mu;
  res.bound_before = per_bs_bound(channels, old_block, covs_hat, m);
  res.bound_after = per_bs_bound(channels, new_block, covs_hat, m);
  res.accepted = res.bound_after >= res.bound_before;
  if (res.accepted) {
    res.beams = cand.beams;
  } else {
    for (int i = 0; i < channels.N; ++i) {
      res.beams.push_back(w_hat.beam(m, i));
    }
  }
  return res;
}

double fixed_point_residual(const ChannelSet& channels, const BeamSet& w_hat,
                            const Vec& w_new, double mu, int m, int i) {
  const double wn = w_new.norm();
  if (wn == 0.0) {
    return 0.0;
  }
  const Mat M = build_M(channels, mu, w_hat, m, i);
  const Vec& h = channels.chan(m, m, i);
  const cxd hw = (h.adjoint() * w_new)(0);
  const double s = std::norm(hw);
  const double inter = interference(channels, w_hat, m, i);
  const Vec rhs = h * (hw / (inter + s));
  const Vec lhs = M * w_new;
  const double scale = std::max(lhs.norm(), rhs.norm());
  return scale > 0.0 ? (lhs - rhs).norm() / scale : 0.0;
}

BeamSet random_feasible_beams(const NetworkConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  const int K = cfg.antennas_per_bs;
  BeamSet beams =
      BeamSet::zeros(cfg.num_coordinated_bs, cfg.users_per_cell, K);
  for (int m = 0; m < cfg.num_coordinated_bs; ++m) {
    const double amp = std::sqrt(cfg.power_budget[static_cast<size_t>(m)] /
                                 cfg.users_per_cell);
    for (int i = 0; i < cfg.users_per_cell; ++i) {
      Vec v = rng.cnormal_vec(K, 1.0);
      const double n2 = v.squaredNorm();
      beams.beam(m, i) =
          n2 > 0.0 ? Vec(amp / std::sqrt(n2) * v) : Vec(amp * Vec::Unit(K, 0));
    }
  }
  return beams;
}

RunTrace run_sbf(const ChannelSet& channels, const NetworkConfig& cfg,
                 const BeamSet& init, std::uint64_t seed) {
  BeamSet beams = init.w.empty() ? random_feasible_beams(cfg, seed) : init;
  check_beams(beams, cfg);

  const int M = cfg.num_coordinated_bs;
  const auto t0 = std::chrono::steady_clock::now();
  RunTrace trace;
  std::vector<double> rate_after;
  rate_after.push_back(sum_rate(channels, beams));

  for (int t = 0; t < cfg.max_outer_iters; ++t) {
    const int m = t % M;
    const BsUpdateResult res = update_bs(
        channels, beams, m, cfg.power_budget[static_cast<size_t>(m)], cfg);
    if (res.accepted) {
      for (int i = 0; i < channels.N; ++i) {
        beams.beam(m, i) = res.beams[static_cast<size_t>(i)];
      }
    }
    const double r = sum_rate(channels, beams);

    IterationRecord rec;
    rec.iter = t;
    rec.active_bs = m;
    rec.sum_rate = r;
    rec.bound = res.bound_after;
    rec.info_units = 1;
    rec.accepted = res.accepted;
    rec.wall_time = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    trace.records.push_back(rec);
    rate_after.push_back(r);

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
  trace.total_info_units = trace.outer_iterations;
  return trace;
}

}  // namespace cobeam::sbf
