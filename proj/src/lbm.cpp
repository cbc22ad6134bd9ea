#include "cobeam/lbm.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "cobeam/simd/kernels.hpp"

namespace cobeam::lbm {

namespace {

constexpr double kLn2 = 0.693147180559945309417232121458;

// Data shared across all fixed-mu evaluations of one solve.
struct Subproblem {
  Mat A_nat;  // ln2 * aggregate, Hermitian PSD
  Vec h;      // direct channel of the cell's user
  double inter = 0.0;
  bool A_full_rank = false;
};

Subproblem make_subproblem(const ChannelSet& channels, const CovSet& covs_hat,
                           int m) {
  Subproblem sp;
  sp.A_nat = kLn2 * assemble_A(channels, covs_hat, m).A;
  sp.h = channels.chan(m, m, 0);
  sp.inter = interference(channels, covs_hat, m, 0);
  Eigen::SelfAdjointEigenSolver<Mat> es(sp.A_nat, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double top = ev(ev.size() - 1);
  sp.A_full_rank = top > 0.0 && ev(0) > 1e-10 * top;
  return sp;
}

// Water-filling solution of the whitened problem at one multiplier.  With
// B = A_nat + mu*I = L^H L the whitened channel form (L^-H h)(L^-H h)^H / I
// has a single eigenvalue delta = |L^-H h|^2 / I; its water-filled power is
// [(delta-1)/delta]^+ and the maximizer maps back as a rank-1 matrix.
Mat fixed_mu(const Subproblem& sp, double mu) {
  const Eigen::Index K = sp.h.size();
  Mat B = sp.A_nat;
  B.diagonal().array() += mu;
  Eigen::LLT<Mat> llt(B);
  if (llt.info() != Eigen::Success) {
    throw SingularPenalty("penalized aggregate is not positive definite");
  }
  // Eigen's LLT stores B = L L^H, so matrixL().solve gives the whitened
  // channel L^-1 h whose squared norm is h^H B^-1 h.
  const Vec b = llt.matrixL().solve(sp.h);
  const double bn2 = simd::norm_sq(static_cast<std::size_t>(K), b.data());
  const double delta = bn2 / sp.inter;
  if (delta <= 1.0 || bn2 == 0.0) {
    return Mat::Zero(K, K);
  }
  const double what = (delta - 1.0) / delta;
  const Vec u = llt.matrixU().solve(Vec(b / std::sqrt(bn2)));
  Mat W = Mat::Zero(K, K);
  simd::rank1_accum(static_cast<std::size_t>(K), what, u.data(), W.data(),
                    static_cast<std::size_t>(K));
  return symmetrized(W);
}

}  // namespace

AggregateMatrix assemble_A(const ChannelSet& channels, const CovSet& covs_hat,
                           int m) {
  if (channels.N != 1) {
    throw DimensionError("aggregate matrix is defined for one user per cell");
  }
  const TaxationTable tab = taxation(channels, covs_hat);
  const std::size_t K = static_cast<std::size_t>(channels.K);
  Mat A = Mat::Zero(channels.K, channels.K);
  for (int q = 0; q < channels.M; ++q) {
    if (q == m) {
      continue;
    }
    const Vec& h = channels.chan(m, q, 0);
    simd::rank1_accum(K, tab.tax(q, 0), h.data(), A.data(), K);
  }
  return AggregateMatrix{symmetrized(A)};
}

std::vector<double> diag_waterfill(const std::vector<double>& delta) {
  std::vector<double> out(delta.size(), 0.0);
  for (size_t i = 0; i < delta.size(); ++i) {
    if (delta[i] > 1.0) {
      out[i] = (delta[i] - 1.0) / delta[i];
    }
  }
  return out;
}

Mat solve_fixed_mu(const ChannelSet& channels, const CovSet& covs_hat, int m,
                   double mu) {
  const Subproblem sp = make_subproblem(channels, covs_hat, m);
  if (mu <= 0.0 && !sp.A_full_rank) {
    throw SingularPenalty(
        "mu = 0 requires a full-rank aggregate matrix for BS " +
        std::to_string(m));
  }
  return fixed_mu(sp, std::max(mu, 0.0));
}

LbmSolution solve_lbm(const ChannelSet& channels, const CovSet& covs_hat,
                      int m, double budget, double bisection_tol) {
  const Subproblem sp = make_subproblem(channels, covs_hat, m);
  LbmSolution sol;

  if (sp.A_full_rank) {
    const Mat W0 = fixed_mu(sp, 0.0);
    ++sol.iterations;
    const double p0 = W0.trace().real();
    if (p0 <= budget) {
      sol.W_star = W0;
      sol.mu_star = 0.0;
      sol.power_used = p0;
      return sol;
    }
  }

  // Power is strictly decreasing in mu, so doubling establishes a bracket
  // with the budget-feasible side at mu_hi.
  const double tol = bisection_tol * budget;
  double mu_lo = 0.0;
  double mu_hi = 1.0;
  Mat W_hi;
  double p_hi = 0.0;
  for (int tries = 0;; ++tries) {
    W_hi = fixed_mu(sp, mu_hi);
    ++sol.iterations;
    p_hi = W_hi.trace().real();
    if (p_hi <= budget) {
      break;
    }
    mu_lo = mu_hi;
    mu_hi *= 2.0;
    if (tries > 200) {
      throw BisectionFailure("could not bracket the power multiplier");
    }
  }

  while (std::abs(p_hi - budget) >= tol &&
         mu_hi - mu_lo > 1e-12 * std::max(1.0, mu_hi)) {
    const double mid = 0.5 * (mu_lo + mu_hi);
    const Mat W_mid = fixed_mu(sp, mid);
    ++sol.iterations;
    const double p_mid = W_mid.trace().real();
    if (p_mid > budget) {
      mu_lo = mid;
    } else {
      mu_hi = mid;
      W_hi = W_mid;
      p_hi = p_mid;
    }
  }

  sol.W_star = W_hi;
  sol.mu_star = mu_hi;
  sol.power_used = p_hi;
  return sol;
}

}  // namespace cobeam::lbm
