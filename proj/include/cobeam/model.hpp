#pragma once

// Core domain types for the coordinated multi-cell downlink: network
// dimensions, channel realizations, and the two transmit representations
// (beam vectors and rank-1 covariances) with conversions between them.
//
// Indexing convention used everywhere: user (m,i) = user i served by BS m,
// flattened row-major as u = m*N + i.  Channels are kept per transmitting BS:
// chan(q, m, i) is the K-vector from BS q's array to user (m,i).

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "cobeam/errors.hpp"

namespace cobeam {

using cxd = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

struct NetworkConfig {
  int num_coordinated_bs = 1;  // M
  int users_per_cell = 1;      // N
  int antennas_per_bs = 1;     // K
  std::vector<double> power_budget;  // size M, watts (normalized), > 0
  std::vector<double> user_weights;  // size M*N, >= 0; empty means all ones
  double stop_tol = 1e-2;            // bits/s/Hz change between outer rounds
  int max_outer_iters = 500;
  double bisection_tol = 1e-8;  // relative to the power budget
  double psd_tol = 1e-9;        // relative Hermitian/PSD slack
  int sbf_inner_sweeps = 0;   // extra fixed-point sweeps before acceptance
  int icbf_inner_iters = 3;   // inner refinements per simultaneous round

  int num_users() const { return num_coordinated_bs * users_per_cell; }
  int user_index(int m, int i) const { return m * users_per_cell + i; }
  double weight(int u) const {
    return user_weights.empty() ? 1.0 : user_weights[static_cast<size_t>(u)];
  }

  // Throws ConfigError naming the offending field.
  void validate() const;
};

struct ChannelSet {
  int M = 0, N = 0, K = 0;
  // h[q * M*N + u]: channel from BS q to flattened user u, length K.
  std::vector<Vec> h;
  std::vector<double> noise_power;  // c[u] > 0, size M*N

  int num_users() const { return M * N; }
  int user_index(int m, int i) const { return m * N + i; }

  const Vec& chan(int q, int m, int i) const {
    return h[static_cast<size_t>(q * M * N + m * N + i)];
  }
  Vec& chan(int q, int m, int i) {
    return h[static_cast<size_t>(q * M * N + m * N + i)];
  }
  double noise(int m, int i) const {
    return noise_power[static_cast<size_t>(m * N + i)];
  }

  static ChannelSet zeros(int M, int N, int K);
  void validate() const;
};

struct BeamSet {
  int M = 0, N = 0, K = 0;
  std::vector<Vec> w;  // flattened user order, each length K

  const Vec& beam(int m, int i) const {
    return w[static_cast<size_t>(m * N + i)];
  }
  Vec& beam(int m, int i) { return w[static_cast<size_t>(m * N + i)]; }

  static BeamSet zeros(int M, int N, int K);
  // Per-BS transmit power Σ_i ‖w_{m,i}‖².
  double bs_power(int m) const;
};

struct CovSet {
  int M = 0, N = 0, K = 0;
  std::vector<Mat> W;  // flattened user order, each K x K

  const Mat& cov(int m, int i) const {
    return W[static_cast<size_t>(m * N + i)];
  }
  Mat& cov(int m, int i) { return W[static_cast<size_t>(m * N + i)]; }

  static CovSet zeros(int M, int N, int K);
  double bs_power(int m) const;  // Tr Σ_i W_{m,i}
};

// W_{m,i} = w_{m,i} w_{m,i}ᴴ for every user.
CovSet beams_to_covs(const BeamSet& beams);

// Extracts v with vvᴴ ≈ W from a numerically rank-1 PSD matrix; ‖v‖² = Tr(W)
// and the first nonzero entry of v is real nonnegative (fixes global phase).
// Throws RankError when the second eigenvalue exceeds tol * largest.
Vec cov_to_beam(const Mat& W, double tol);

BeamSet covs_to_beams(const CovSet& covs, double tol);

// (W + Wᴴ)/2, cheap guard against drift after eigen/linear-solve steps.
Mat symmetrized(const Mat& W);

// Feasibility checks used by tests and solver entry points; throw on failure.
void check_beams(const BeamSet& beams, const NetworkConfig& cfg);
void check_covs(const CovSet& covs, const NetworkConfig& cfg);

}  // namespace cobeam
