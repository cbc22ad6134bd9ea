#include "cobeam/rates.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "cobeam/simd/kernels.hpp"

namespace cobeam {

namespace {

constexpr double kLn2 = 0.693147180559945309417232121458;

// Re(h^H W h) through the kernel layer; Eigen matrices are column-major.
double qform(const Vec& h, const Mat& W) {
  return simd::quad_form(static_cast<std::size_t>(h.size()), h.data(),
                         W.data(), static_cast<std::size_t>(W.rows()));
}

double beam_gain(const Vec& h, const Vec& w) {
  const cxd d =
      simd::cdotc(static_cast<std::size_t>(h.size()), h.data(), w.data());
  return std::norm(d);
}

}  // namespace

double interference(const ChannelSet& channels, const CovSet& covs, int m,
                    int i) {
  double s = channels.noise(m, i);
  for (int q = 0; q < channels.M; ++q) {
    const Vec& h = channels.chan(q, m, i);
    for (int j = 0; j < channels.N; ++j) {
      if (q == m && j == i) {
        continue;
      }
      s += qform(h, covs.cov(q, j));
    }
  }
  return s;
}

double interference(const ChannelSet& channels, const BeamSet& beams, int m,
                    int i) {
  double s = channels.noise(m, i);
  for (int q = 0; q < channels.M; ++q) {
    const Vec& h = channels.chan(q, m, i);
    for (int j = 0; j < channels.N; ++j) {
      if (q == m && j == i) {
        continue;
      }
      s += beam_gain(h, beams.beam(q, j));
    }
  }
  return s;
}

double user_rate(const ChannelSet& channels, const CovSet& covs, int m,
                 int i) {
  const double sig = qform(channels.chan(m, m, i), covs.cov(m, i));
  return std::log2(1.0 + std::max(0.0, sig) / interference(channels, covs, m, i));
}

double user_rate(const ChannelSet& channels, const BeamSet& beams, int m,
                 int i) {
  const double sig = beam_gain(channels.chan(m, m, i), beams.beam(m, i));
  return std::log2(1.0 + sig / interference(channels, beams, m, i));
}

double sum_rate(const ChannelSet& channels, const CovSet& covs,
                const std::vector<double>& weights) {
  double r = 0.0;
  for (int m = 0; m < channels.M; ++m) {
    for (int i = 0; i < channels.N; ++i) {
      const double w =
          weights.empty() ? 1.0
                          : weights[static_cast<size_t>(channels.user_index(m, i))];
      r += w * user_rate(channels, covs, m, i);
    }
  }
  return r;
}

double sum_rate(const ChannelSet& channels, const BeamSet& beams,
                const std::vector<double>& weights) {
  double r = 0.0;
  for (int m = 0; m < channels.M; ++m) {
    for (int i = 0; i < channels.N; ++i) {
      const double w =
          weights.empty() ? 1.0
                          : weights[static_cast<size_t>(channels.user_index(m, i))];
      r += w * user_rate(channels, beams, m, i);
    }
  }
  return r;
}

TaxationTable taxation(const ChannelSet& channels, const CovSet& covs_hat) {
  TaxationTable tab;
  tab.M = channels.M;
  tab.N = channels.N;
  tab.T.resize(static_cast<size_t>(channels.num_users()));
  tab.evaluated_at = covs_hat;
  for (int q = 0; q < channels.M; ++q) {
    for (int j = 0; j < channels.N; ++j) {
      const double s =
          std::max(0.0, qform(channels.chan(q, q, j), covs_hat.cov(q, j)));
      const double inter = interference(channels, covs_hat, q, j);
      tab.T[static_cast<size_t>(channels.user_index(q, j))] =
          s / (kLn2 * (inter + s) * inter);
    }
  }
  return tab;
}

double per_user_bound(const ChannelSet& channels, const Mat& W_mi,
                      const CovSet& covs_hat, int m, int i) {
  // Own rate with W substituted; this user's interference does not depend on
  // its own covariance, so it is evaluated at the expansion point.
  const double sig = std::max(0.0, qform(channels.chan(m, m, i), W_mi));
  double value =
      std::log2(1.0 + sig / interference(channels, covs_hat, m, i));

  const TaxationTable tab = taxation(channels, covs_hat);
  const Mat dW = W_mi - covs_hat.cov(m, i);
  for (int q = 0; q < channels.M; ++q) {
    for (int j = 0; j < channels.N; ++j) {
      if (q == m && j == i) {
        continue;
      }
      value += user_rate(channels, covs_hat, q, j);
      // Channel from our BS m to the taxed user (q,j).
      value -= tab.tax(q, j) * qform(channels.chan(m, q, j), dW);
    }
  }
  return value;
}

double per_bs_bound(const ChannelSet& channels, const std::vector<Mat>& W_m,
                    const CovSet& covs_hat, int m) {
  // Rates of BS m's own users with the whole block replaced: in-cell
  // interference uses the new block, other cells stay at the expansion point.
  CovSet mixed = covs_hat;
  for (int i = 0; i < channels.N; ++i) {
    mixed.cov(m, i) = W_m[static_cast<size_t>(i)];
  }
  double value = 0.0;
  for (int i = 0; i < channels.N; ++i) {
    value += user_rate(channels, mixed, m, i);
  }

  const TaxationTable tab = taxation(channels, covs_hat);
  for (int q = 0; q < channels.M; ++q) {
    if (q == m) {
      continue;
    }
    for (int j = 0; j < channels.N; ++j) {
      value += user_rate(channels, covs_hat, q, j);
      const Vec& h = channels.chan(m, q, j);
      double leak = 0.0;
      for (int i = 0; i < channels.N; ++i) {
        leak += qform(h, W_m[static_cast<size_t>(i)] - covs_hat.cov(m, i));
      }
      value -= tab.tax(q, j) * leak;
    }
  }
  return value;
}

double directional_second_derivative(const ChannelSet& channels,
                                     const CovSet& covs,
                                     std::pair<int, int> target_user,
                                     std::pair<int, int> varied_user,
                                     const Mat& direction, double step) {
  const auto [m, i] = target_user;
  const auto [q, j] = varied_user;
  const Mat& W0 = covs.cov(q, j);

  const auto rate_at = [&](double t) {
    CovSet probe = covs;
    probe.cov(q, j) = symmetrized(W0 + t * direction);
    Eigen::SelfAdjointEigenSolver<Mat> es(probe.cov(q, j),
                                          Eigen::EigenvaluesOnly);
    const double scale = std::max(1.0, std::abs(probe.cov(q, j).trace().real()));
    if (es.eigenvalues()(0) < -1e-10 * scale) {
      throw StencilInfeasible(
          "perturbed covariance leaves the PSD cone at t = " +
          std::to_string(t));
    }
    return user_rate(channels, probe, m, i);
  };

  const double r_minus = rate_at(-step);
  const double r_zero = rate_at(0.0);
  const double r_plus = rate_at(step);
  return (r_plus - 2.0 * r_zero + r_minus) / (step * step);
}

}  // namespace cobeam
