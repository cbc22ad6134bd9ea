#pragma once

// Rank reduction for solutions of the relaxed per-BS subproblem.  Given a
// PSD W = VV^H with rank r, a Hermitian direction D satisfying
//   Tr(D V^H H V) = Tr(D V^H A V) = Tr(D V^H V) = 0
// lets us move to W' = V (I - D/lambda_max(D)) V^H, which keeps the objective
// and both constraint values while dropping the rank by at least one.  With 3
// real constraints and r^2 real degrees of freedom a nonzero D exists whenever
// r^2 > 3, so iterating must end at rank 1.  Used as a verification path for
// the closed-form solver, not in any production loop.

#include <optional>

#include "cobeam/model.hpp"

namespace cobeam::rrp {

struct ReductionStep {
  Mat V;       // K x r factor with W = V V^H
  Mat D;       // r x r Hermitian, in the nullspace of the three functionals
  double lambda_max = 0.0;  // eigenvalue of D with largest magnitude
};

// Eigenfactor restricted to eigenvalues above rel_tol * lambda_max, scaled so
// W = V V^H (columns carry sqrt(eigenvalue)).
Mat rank_factor(const Mat& W, double rel_tol = 1e-9);

// Nonzero Hermitian D in the nullspace of the three trace functionals, unit
// Frobenius norm, or nullopt when only the zero solution exists (possible
// only for r^2 <= 3).
std::optional<Mat> find_direction(const Mat& V, const Mat& H, const Mat& A);

// Builds the factor and direction for one reduction move.
ReductionStep plan_step(const Mat& W, const Mat& H, const Mat& A);

// One reduction move; output PSD with rank lowered by >= 1 and Tr(HW),
// Tr(AW), Tr(W) preserved.  Throws NoDirection when no move exists.
Mat reduce_step(const Mat& W, const Mat& H, const Mat& A);

// Repeats reduce_step until numerical rank 1 (at most r times).
Mat reduce_to_rank_one(const Mat& W, const Mat& H, const Mat& A);

}  // namespace cobeam::rrp
