#include "cobeam/rrp.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace cobeam::rrp {

namespace {

// Real coefficient row of x -> Tr(D(x) G) for Hermitian G, where x packs a
// Hermitian r x r matrix D as r diagonal reals, then for each i<j the real
// and imaginary parts of D_ij.  Using D_ji = conj(D_ij),
//   Tr(D G) = sum_i d_ii G_ii + sum_{i<j} 2 Re(D_ij) Re(G_ij) + 2 Im(D_ij) Im(G_ij).
Eigen::RowVectorXd functional_row(const Mat& G) {
  const Eigen::Index r = G.rows();
  Eigen::RowVectorXd row(r * r);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < r; ++i) {
    row(k++) = G(i, i).real();
  }
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = i + 1; j < r; ++j) {
      row(k++) = 2.0 * G(i, j).real();
      row(k++) = 2.0 * G(i, j).imag();
    }
  }
  return row;
}

Mat unpack_hermitian(const Eigen::VectorXd& x, Eigen::Index r) {
  Mat D = Mat::Zero(r, r);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < r; ++i) {
    D(i, i) = x(k++);
  }
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = i + 1; j < r; ++j) {
      D(i, j) = cxd(x(k), x(k + 1));
      D(j, i) = std::conj(D(i, j));
      k += 2;
    }
  }
  return D;
}

}  // namespace

Mat rank_factor(const Mat& W, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrized(W));
  const auto& ev = es.eigenvalues();  // ascending
  const Eigen::Index K = W.rows();
  const double top = std::max(0.0, ev(K - 1));
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < K; ++k) {
    if (ev(k) > rel_tol * top && ev(k) > 0.0) {
      keep.push_back(k);
    }
  }
  Mat V(K, static_cast<Eigen::Index>(keep.size()));
  for (size_t c = 0; c < keep.size(); ++c) {
    V.col(static_cast<Eigen::Index>(c)) =
        std::sqrt(ev(keep[c])) * es.eigenvectors().col(keep[c]);
  }
  return V;
}

std::optional<Mat> find_direction(const Mat& V, const Mat& H, const Mat& A) {
  const Eigen::Index r = V.cols();
  if (r < 1) {
    return std::nullopt;
  }
  Eigen::MatrixXd C(3, r * r);
  C.row(0) = functional_row(V.adjoint() * H * V);
  C.row(1) = functional_row(V.adjoint() * A * V);
  C.row(2) = functional_row(V.adjoint() * V);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      C, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const Eigen::VectorXd x = svd.matrixV().col(r * r - 1);
  const double scale = std::max(1.0, C.norm());
  if ((C * x).norm() > 1e-10 * scale) {
    // Full column rank (only reachable when r^2 <= 3): no nonzero solution.
    return std::nullopt;
  }
  Mat D = unpack_hermitian(x, r);
  const double nf = D.norm();
  if (nf == 0.0) {
    return std::nullopt;
  }
  return Mat(D / nf);
}

ReductionStep plan_step(const Mat& W, const Mat& H, const Mat& A) {
  ReductionStep step;
  step.V = rank_factor(W);
  auto D = find_direction(step.V, H, A);
  if (!D) {
    throw NoDirection("no trace-preserving direction at rank " +
                      std::to_string(step.V.cols()));
  }
  step.D = *D;
  Eigen::SelfAdjointEigenSolver<Mat> es(step.D, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double lo = ev(0), hi = ev(ev.size() - 1);
  // Largest magnitude; a tie resolves to the positive eigenvalue.
  step.lambda_max = (std::abs(lo) > std::abs(hi)) ? lo : hi;
  return step;
}

Mat reduce_step(const Mat& W, const Mat& H, const Mat& A) {
  const ReductionStep step = plan_step(W, H, A);
  const Eigen::Index r = step.V.cols();
  const Mat core =
      Mat::Identity(r, r) - step.D / step.lambda_max;
  return symmetrized(step.V * core * step.V.adjoint());
}

Mat reduce_to_rank_one(const Mat& W, const Mat& H, const Mat& A) {
  Mat cur = symmetrized(W);
  for (Eigen::Index guard = 0; guard <= W.rows() + 1; ++guard) {
    const Mat V = rank_factor(cur);
    if (V.cols() <= 1) {
      return cur;
    }
    cur = reduce_step(cur, H, A);
  }
  throw NoDirection("rank reduction failed to terminate");
}

}  // namespace cobeam::rrp
