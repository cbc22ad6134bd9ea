#pragma once

// Per-run bookkeeping shared by every iterative algorithm: one record per
// outer iteration plus the converged state.  Backhaul cost is tracked as
// "information units": delivering all coordinated taxation terms to one
// updating BS costs one unit, so sequential schemes log 1 per iteration and
// the simultaneous scheme logs M.

#include <vector>

#include "cobeam/model.hpp"

namespace cobeam {

struct IterationRecord {
  int iter = 0;
  int active_bs = -1;  // -1 when all BSs updated simultaneously
  double sum_rate = 0.0;  // after this iteration's update
  double bound = 0.0;     // per-BS surrogate bound value achieved
  int info_units = 0;
  bool accepted = true;   // candidate kept (guarded algorithms may reject)
  double wall_time = 0.0;  // seconds since run start
};

struct RunTrace {
  std::vector<IterationRecord> records;
  CovSet final_covs;
  BeamSet final_beams;
  bool converged = false;
  double final_sum_rate = 0.0;
  // Terminal stationarity surrogate (filled by the covariance algorithm;
  // zero for the others).
  double kkt_residual = 0.0;
  int outer_iterations = 0;
  int total_info_units = 0;
};

}  // namespace cobeam
