#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "cobeam/rng.hpp"
#include "cobeam/rrp.hpp"
#include "support/oracles.hpp"

using namespace cobeam;

namespace {

int numerical_rank(const Mat& W) {
  Eigen::SelfAdjointEigenSolver<Mat> es(W);
  const double lead = es.eigenvalues().cwiseAbs().maxCoeff();
  if (lead <= 0.0) {
    return 0;
  }
  return static_cast<int>(
      (es.eigenvalues().array().abs() > 1e-9 * lead).count());
}

struct Instance {
  Mat W, H, A;
};

Instance random_instance(int K, int rank, Rng& rng) {
  Instance in;
  in.W = oracle::random_psd(K, rank, rng.uniform(0.5, 2.0), rng);
  Vec h = rng.cnormal_vec(K, 1.0);
  in.H = h * h.adjoint();
  in.A = oracle::random_psd(K, K, rng.uniform(0.5, 2.0), rng);
  return in;
}

}  // namespace

TEST_SUITE("rrp") {

TEST_CASE("rank_factor reconstructs the matrix") {
  Rng rng(51);
  for (int rank : {1, 2, 3, 4}) {
    Mat W = oracle::random_psd(4, rank, 1.0, rng);
    Mat V = rrp::rank_factor(W);
    CHECK(V.cols() == rank);
    CHECK((V * V.adjoint() - W).norm() <= 1e-12 * W.norm());
  }
}

TEST_CASE("find_direction lands in the nullspace of all three functionals") {
  Rng rng(52);
  for (int rank : {2, 3, 4}) {
    Instance in = random_instance(5, rank, rng);
    Mat V = rrp::rank_factor(in.W);
    auto D = rrp::find_direction(V, in.H, in.A);
    REQUIRE(D.has_value());
    CHECK((*D - D->adjoint()).norm() <= 1e-12);
    CHECK(D->norm() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs((*D * (V.adjoint() * in.H * V)).trace().real()) <= 1e-9);
    CHECK(std::abs((*D * (V.adjoint() * in.A * V)).trace().real()) <= 1e-9);
    CHECK(std::abs((*D * (V.adjoint() * V)).trace().real()) <= 1e-9);
  }
}

TEST_CASE("rank 1 admits no direction") {
  Rng rng(53);
  Instance in = random_instance(4, 1, rng);
  Mat V = rrp::rank_factor(in.W);
  CHECK_FALSE(rrp::find_direction(V, in.H, in.A).has_value());
}

TEST_CASE("one reduction step conserves the three traces and drops rank") {
  Rng rng(54);
  for (int trial = 0; trial < 20; ++trial) {
    const int K = 3 + static_cast<int>(rng.next_u64() % 3);
    const int rank = 2 + static_cast<int>(rng.next_u64() % (K - 1));
    Instance in = random_instance(K, rank, rng);

    Mat W2 = rrp::reduce_step(in.W, in.H, in.A);
    const double tr = in.W.trace().real();
    CHECK(W2.trace().real() == doctest::Approx(tr).epsilon(1e-9));
    CHECK((in.H * W2).trace().real() ==
          doctest::Approx((in.H * in.W).trace().real()).epsilon(1e-9));
    CHECK((in.A * W2).trace().real() ==
          doctest::Approx((in.A * in.W).trace().real()).epsilon(1e-9));
    CHECK(numerical_rank(W2) < rank);

    Eigen::SelfAdjointEigenSolver<Mat> es(W2);
    CHECK(es.eigenvalues().minCoeff() >= -1e-9 * tr);
  }
}

TEST_CASE("reduction terminates at rank one with the bound value intact") {
  Rng rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    const int K = 4;
    const int rank = 2 + static_cast<int>(rng.next_u64() % 3);
    Instance in = random_instance(K, rank, rng);

    Mat W1 = rrp::reduce_to_rank_one(in.W, in.H, in.A);
    CHECK(numerical_rank(W1) <= 1);
    CHECK(W1.trace().real() ==
          doctest::Approx(in.W.trace().real()).epsilon(1e-9));
    CHECK((in.H * W1).trace().real() ==
          doctest::Approx((in.H * in.W).trace().real()).epsilon(1e-9));
    CHECK((in.A * W1).trace().real() ==
          doctest::Approx((in.A * in.W).trace().real()).epsilon(1e-9));
  }
}

TEST_CASE("reduction preserves the per-BS surrogate objective") {
  Rng rng(56);
  ChannelSet ch = oracle::random_channels(3, 1, 4, rng);
  NetworkConfig cfg = oracle::config_for(ch);
  CovSet covs = oracle::random_rank1_covs(ch, cfg, rng);

  Mat W = oracle::random_psd(4, 3, 0.8, rng);
  const Vec& h = ch.chan(0, 0, 0);
  Mat H = h * h.adjoint();
  Mat A = oracle::loop_aggregate(ch, covs, 0);

  Mat W1 = rrp::reduce_to_rank_one(W, H, A);
  CHECK(oracle::bound_objective(ch, covs, 0, W1) ==
        doctest::Approx(oracle::bound_objective(ch, covs, 0, W))
            .epsilon(1e-9));
}

TEST_CASE("rank <= 1 inputs pass through unchanged") {
  Rng rng(57);
  Instance in = random_instance(4, 1, rng);
  Mat out = rrp::reduce_to_rank_one(in.W, in.H, in.A);
  CHECK((out - in.W).norm() <= 1e-14 * in.W.norm());

  Mat zero = Mat::Zero(4, 4);
  CHECK(rrp::reduce_to_rank_one(zero, in.H, in.A).isZero());
}

}  // TEST_SUITE
