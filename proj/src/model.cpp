#include "cobeam/model.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

namespace cobeam {

void NetworkConfig::validate() const {
  if (num_coordinated_bs < 1) {
    throw ConfigError("num_coordinated_bs must be >= 1");
  }
  if (users_per_cell < 1) {
    throw ConfigError("users_per_cell must be >= 1");
  }
  if (antennas_per_bs < 1) {
    throw ConfigError("antennas_per_bs must be >= 1");
  }
  if (power_budget.size() != static_cast<size_t>(num_coordinated_bs)) {
    throw ConfigError("power_budget must have one entry per coordinated BS");
  }
  for (size_t m = 0; m < power_budget.size(); ++m) {
    if (!(power_budget[m] > 0.0)) {
      throw ConfigError("power_budget[" + std::to_string(m) +
                        "] must be > 0");
    }
  }
  if (!user_weights.empty()) {
    if (user_weights.size() != static_cast<size_t>(num_users())) {
      throw ConfigError("user_weights must be empty or have M*N entries");
    }
    for (size_t u = 0; u < user_weights.size(); ++u) {
      if (!(user_weights[u] >= 0.0)) {
        throw ConfigError("user_weights[" + std::to_string(u) +
                          "] must be >= 0");
      }
    }
  }
  if (!(stop_tol > 0.0)) {
    throw ConfigError("stop_tol must be > 0");
  }
  if (max_outer_iters < 1) {
    throw ConfigError("max_outer_iters must be >= 1");
  }
  if (!(bisection_tol > 0.0)) {
    throw ConfigError("bisection_tol must be > 0");
  }
  if (!(psd_tol >= 0.0)) {
    throw ConfigError("psd_tol must be >= 0");
  }
  if (sbf_inner_sweeps < 0) {
    throw ConfigError("sbf_inner_sweeps must be >= 0");
  }
  if (icbf_inner_iters < 1) {
    throw ConfigError("icbf_inner_iters must be >= 1");
  }
}

ChannelSet ChannelSet::zeros(int M, int N, int K) {
  ChannelSet cs;
  cs.M = M;
  cs.N = N;
  cs.K = K;
  cs.h.assign(static_cast<size_t>(M) * M * N, Vec::Zero(K));
  cs.noise_power.assign(static_cast<size_t>(M) * N, 1.0);
  return cs;
}

void ChannelSet::validate() const {
  if (M < 1 || N < 1 || K < 1) {
    throw ConfigError("channel set dimensions must be >= 1");
  }
  if (h.size() != static_cast<size_t>(M) * M * N) {
    throw ConfigError("channel set must hold M * (M*N) vectors");
  }
  for (const Vec& v : h) {
    if (v.size() != K) {
      throw ConfigError("every channel vector must have length K");
    }
  }
  if (noise_power.size() != static_cast<size_t>(M) * N) {
    throw ConfigError("noise_power must have M*N entries");
  }
  for (double c : noise_power) {
    if (!(c > 0.0)) {
      throw ConfigError("noise power must be > 0 for every user");
    }
  }
}

BeamSet BeamSet::zeros(int M, int N, int K) {
  BeamSet bs;
  bs.M = M;
  bs.N = N;
  bs.K = K;
  bs.w.assign(static_cast<size_t>(M) * N, Vec::Zero(K));
  return bs;
}

double BeamSet::bs_power(int m) const {
  double p = 0.0;
  for (int i = 0; i < N; ++i) {
    p += beam(m, i).squaredNorm();
  }
  return p;
}

CovSet CovSet::zeros(int M, int N, int K) {
  CovSet cs;
  cs.M = M;
  cs.N = N;
  cs.K = K;
  cs.W.assign(static_cast<size_t>(M) * N, Mat::Zero(K, K));
  return cs;
}

double CovSet::bs_power(int m) const {
  double p = 0.0;
  for (int i = 0; i < N; ++i) {
    p += cov(m, i).trace().real();
  }
  return p;
}

CovSet beams_to_covs(const BeamSet& beams) {
  CovSet covs = CovSet::zeros(beams.M, beams.N, beams.K);
  for (size_t u = 0; u < beams.w.size(); ++u) {
    covs.W[u] = beams.w[u] * beams.w[u].adjoint();
  }
  return covs;
}

Vec cov_to_beam(const Mat& W, double tol) {
  const Mat S = symmetrized(W);
  Eigen::SelfAdjointEigenSolver<Mat> es(S);
  const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
  const Eigen::Index K = S.rows();
  const double lead = ev(K - 1);
  if (lead <= 0.0) {
    return Vec::Zero(K);  // zero (or negligible) covariance
  }
  const double second = (K >= 2) ? std::abs(ev(K - 2)) : 0.0;
  if (second > tol * lead) {
    throw RankError("covariance has numerical rank > 1 (lambda2/lambda1 = " +
                    std::to_string(second / lead) + ")");
  }
  Vec v = std::sqrt(lead) * es.eigenvectors().col(K - 1);
  // Global phase: rotate so the first nonzero entry is real nonnegative.
  for (Eigen::Index k = 0; k < K; ++k) {
    const double a = std::abs(v(k));
    if (a > 0.0) {
      v *= std::conj(v(k)) / a;
      break;
    }
  }
  return v;
}

BeamSet covs_to_beams(const CovSet& covs, double tol) {
  BeamSet beams = BeamSet::zeros(covs.M, covs.N, covs.K);
  for (size_t u = 0; u < covs.W.size(); ++u) {
    beams.w[u] = cov_to_beam(covs.W[u], tol);
  }
  return beams;
}

Mat symmetrized(const Mat& W) { return 0.5 * (W + W.adjoint()); }

void check_beams(const BeamSet& beams, const NetworkConfig& cfg) {
  if (beams.M != cfg.num_coordinated_bs || beams.N != cfg.users_per_cell ||
      beams.K != cfg.antennas_per_bs) {
    throw DimensionError("beam set dimensions do not match the network");
  }
  for (int m = 0; m < beams.M; ++m) {
    const double p = beams.bs_power(m);
    const double budget = cfg.power_budget[static_cast<size_t>(m)];
    if (p > budget * (1.0 + cfg.psd_tol) + cfg.psd_tol) {
      throw InfeasibleInit("BS " + std::to_string(m) + " beam power " +
                           std::to_string(p) + " exceeds budget " +
                           std::to_string(budget));
    }
  }
}

void check_covs(const CovSet& covs, const NetworkConfig& cfg) {
  if (covs.M != cfg.num_coordinated_bs || covs.N != cfg.users_per_cell ||
      covs.K != cfg.antennas_per_bs) {
    throw DimensionError("covariance set dimensions do not match the network");
  }
  for (size_t u = 0; u < covs.W.size(); ++u) {
    const Mat& W = covs.W[u];
    const double scale = std::max(1.0, std::abs(W.trace().real()));
    if ((W - W.adjoint()).norm() > cfg.psd_tol * scale) {
      throw InfeasibleInit("covariance " + std::to_string(u) +
                           " is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(symmetrized(W),
                                          Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -cfg.psd_tol * scale) {
      throw InfeasibleInit("covariance " + std::to_string(u) +
                           " has negative eigenvalue");
    }
  }
  for (int m = 0; m < covs.M; ++m) {
    const double p = covs.bs_power(m);
    const double budget = cfg.power_budget[static_cast<size_t>(m)];
    if (p > budget * (1.0 + cfg.psd_tol) + cfg.psd_tol) {
      throw InfeasibleInit("BS " + std::to_string(m) + " covariance power " +
                           std::to_string(p) + " exceeds budget " +
                           std::to_string(budget));
    }
  }
}

}  // namespace cobeam
