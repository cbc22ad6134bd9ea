#pragma once

// Experiment driver: JSON config in, Monte Carlo sweep over (algorithm, SNR,
// trial), CSV/JSON rows out.  Channel realizations and initial beams are
// derived from (seed, snr index, trial) only, never from the algorithm, so
// every algorithm sees identical instances (paired comparisons).  Output is
// byte-reproducible for a fixed spec regardless of worker count.

#include <cstdint>
#include <string>
#include <vector>

#include "cobeam/simenv.hpp"
#include "cobeam/trace.hpp"

namespace cobeam::harness {

enum class Algorithm { ssca, sbf, icbf, zf, mf };

const char* algorithm_name(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

struct ExperimentSpec {
  int schema_version = 1;
  std::string scenario = "experiment";
  std::vector<Algorithm> algorithms;
  std::vector<double> snr_grid_db;
  int trials = 50;
  std::uint64_t seed = 1;
  NetworkConfig network;
  simenv::PlacementParams placement;
  simenv::FadingParams fading;  // snr_db is overridden by the grid
  std::string output = "results.csv";

  void validate() const;
};

// Parse from JSON text / file; ConfigError carries field diagnostics.
ExperimentSpec parse_spec(const std::string& json_text);
ExperimentSpec load_spec(const std::string& path);

struct ResultRow {
  std::string algorithm;
  double snr_db = 0.0;
  double mean_sum_rate = 0.0;
  double rate_stderr = 0.0;
  double mean_iterations = 0.0;
  double mean_info_units = 0.0;
  int trials = 0;
};

// parallel = 0 means hardware concurrency.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec,
                                      int parallel = 0);

// One (algorithm, snr, trial) cell with the same seeding as run_experiment;
// used by the verbose trace subcommand and tests.
RunTrace run_single_trial(const ExperimentSpec& spec, Algorithm algo,
                          int snr_index, int trial);

int count_info_units(const RunTrace& trace);

std::string format_results_csv(const std::vector<ResultRow>& rows);
std::string format_results_json(const std::vector<ResultRow>& rows);

// format is "csv" or "json".
void emit_results(const std::vector<ResultRow>& rows,
                  const std::string& format, const std::string& path);

// Topology + channel snapshot of trial 0 at the first SNR point, for
// regression fixtures.
std::string fixture_snapshot(const ExperimentSpec& spec);
bool verify_fixture(const ExperimentSpec& spec, const std::string& snapshot,
                    double tol, std::string* diagnostic);

}  // namespace cobeam::harness
