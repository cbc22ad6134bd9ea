#include "cobeam/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "cobeam/baselines.hpp"
#include "cobeam/rng.hpp"
#include "cobeam/sbf.hpp"
#include "cobeam/ssca.hpp"
#include "json.hpp"

namespace cobeam::harness {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail_field(const std::string& field,
                             const std::string& why) {
  throw ConfigError("config field '" + field + "': " + why);
}

double require_number(const json& j, const std::string& field) {
  if (!j.is_number()) {
    fail_field(field, "expected a number");
  }
  return j.get<double>();
}

double number_or(const json& obj, const std::string& field, double def) {
  if (!obj.contains(field)) {
    return def;
  }
  return require_number(obj.at(field), field);
}

int int_or(const json& obj, const std::string& field, int def) {
  if (!obj.contains(field)) {
    return def;
  }
  if (!obj.at(field).is_number_integer()) {
    fail_field(field, "expected an integer");
  }
  return obj.at(field).get<int>();
}

// %.6g, the one float format used for all emitted results.
std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct TrialResult {
  double sum_rate = 0.0;
  int iterations = 0;
  int info_units = 0;
};

struct TrialSeeds {
  std::uint64_t topology = 0;
  std::uint64_t channels = 0;
  std::uint64_t init = 0;
};

// Seeds depend on (master, snr index, trial) only: every algorithm runs on
// the same channels and the same initial beams.
TrialSeeds seeds_for(std::uint64_t master, int snr_index, int trial) {
  const std::uint64_t trial_seed = Rng::derive(
      master, (static_cast<std::uint64_t>(snr_index) << 32) |
                  static_cast<std::uint64_t>(trial));
  return {Rng::derive(trial_seed, 1), Rng::derive(trial_seed, 2),
          Rng::derive(trial_seed, 3)};
}

struct TrialInstance {
  ChannelSet channels;
  TrialSeeds seeds;
};

TrialInstance make_instance(const ExperimentSpec& spec, int snr_index,
                            int trial) {
  TrialInstance inst;
  inst.seeds = seeds_for(spec.seed, snr_index, trial);
  simenv::PlacementParams placement = spec.placement;
  placement.num_coordinated_bs = spec.network.num_coordinated_bs;
  placement.users_per_cell = spec.network.users_per_cell;
  const simenv::Topology topo =
      simenv::generate_topology(placement, inst.seeds.topology);
  simenv::FadingParams fading = spec.fading;
  fading.snr_db = spec.snr_grid_db[static_cast<size_t>(snr_index)];
  inst.channels = simenv::sample_channels(
      topo, fading, spec.network.antennas_per_bs, inst.seeds.channels);
  return inst;
}

RunTrace one_shot_trace(const ChannelSet& channels, const BeamSet& beams) {
  RunTrace trace;
  trace.final_beams = beams;
  trace.final_covs = beams_to_covs(beams);
  trace.final_sum_rate = sum_rate(channels, beams);
  trace.converged = true;
  return trace;
}

RunTrace run_algorithm(const ExperimentSpec& spec, Algorithm algo,
                       const TrialInstance& inst) {
  const NetworkConfig& cfg = spec.network;
  switch (algo) {
    case Algorithm::ssca:
      return ssca::run_ssca(inst.channels, cfg, CovSet{}, inst.seeds.init);
    case Algorithm::sbf:
      return sbf::run_sbf(inst.channels, cfg, BeamSet{}, inst.seeds.init);
    case Algorithm::icbf:
      return baselines::run_icbf_variant(inst.channels, cfg, BeamSet{},
                                         inst.seeds.init);
    case Algorithm::zf:
      return one_shot_trace(inst.channels,
                            baselines::zero_forcing(inst.channels, cfg));
    case Algorithm::mf:
      return one_shot_trace(inst.channels,
                            baselines::matched_filter(inst.channels, cfg));
  }
  throw ConfigError("unknown algorithm");
}

}  // namespace

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::ssca:
      return "ssca";
    case Algorithm::sbf:
      return "sbf";
    case Algorithm::icbf:
      return "icbf";
    case Algorithm::zf:
      return "zf";
    case Algorithm::mf:
      return "mf";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "ssca") return Algorithm::ssca;
  if (name == "sbf") return Algorithm::sbf;
  if (name == "icbf") return Algorithm::icbf;
  if (name == "zf") return Algorithm::zf;
  if (name == "mf") return Algorithm::mf;
  fail_field("algorithms", "unknown algorithm '" + name +
                               "' (expected ssca|sbf|icbf|zf|mf)");
}

void ExperimentSpec::validate() const {
  if (schema_version != 1) {
    fail_field("schema_version", "unsupported version");
  }
  if (algorithms.empty()) {
    fail_field("algorithms", "list must be nonempty");
  }
  if (snr_grid_db.empty()) {
    fail_field("snr_grid_db", "list must be nonempty");
  }
  if (trials < 1) {
    fail_field("trials", "must be >= 1");
  }
  network.validate();
  fading.validate();
  if (!(placement.user_distance_min > 0.0) ||
      placement.user_distance_max < placement.user_distance_min) {
    fail_field("placement", "user distance annulus is empty");
  }
  for (const Algorithm a : algorithms) {
    if (a == Algorithm::ssca && network.users_per_cell != 1) {
      fail_field("algorithms",
                 "ssca requires users_per_cell = 1");
    }
    if (a == Algorithm::zf &&
        network.users_per_cell > network.antennas_per_bs) {
      fail_field("algorithms", "zf requires users_per_cell <= antennas_per_bs");
    }
  }
}

ExperimentSpec parse_spec(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) {
    throw ConfigError("config root must be a JSON object");
  }

  ExperimentSpec spec;
  spec.schema_version = int_or(root, "schema_version", 1);
  if (root.contains("scenario")) {
    if (!root.at("scenario").is_string()) {
      fail_field("scenario", "expected a string");
    }
    spec.scenario = root.at("scenario").get<std::string>();
  }

  if (!root.contains("algorithms") || !root.at("algorithms").is_array()) {
    fail_field("algorithms", "required array of algorithm names");
  }
  for (const auto& a : root.at("algorithms")) {
    if (!a.is_string()) {
      fail_field("algorithms", "entries must be strings");
    }
    spec.algorithms.push_back(parse_algorithm(a.get<std::string>()));
  }

  if (!root.contains("snr_grid_db") || !root.at("snr_grid_db").is_array()) {
    fail_field("snr_grid_db", "required array of SNR points (dB)");
  }
  for (const auto& s : root.at("snr_grid_db")) {
    spec.snr_grid_db.push_back(require_number(s, "snr_grid_db"));
  }

  spec.trials = int_or(root, "trials", 50);
  if (root.contains("seed")) {
    if (!root.at("seed").is_number_unsigned() &&
        !root.at("seed").is_number_integer()) {
      fail_field("seed", "expected an unsigned integer");
    }
    spec.seed = root.at("seed").get<std::uint64_t>();
  }
  if (root.contains("output")) {
    if (!root.at("output").is_string()) {
      fail_field("output", "expected a string path");
    }
    spec.output = root.at("output").get<std::string>();
  }

  if (!root.contains("network") || !root.at("network").is_object()) {
    fail_field("network", "required object");
  }
  const json& net = root.at("network");
  NetworkConfig& cfg = spec.network;
  cfg.num_coordinated_bs = int_or(net, "num_coordinated_bs", 0);
  cfg.users_per_cell = int_or(net, "users_per_cell", 0);
  cfg.antennas_per_bs = int_or(net, "antennas_per_bs", 0);
  if (net.contains("power_budget")) {
    const json& pb = net.at("power_budget");
    if (pb.is_number()) {
      cfg.power_budget.assign(
          static_cast<size_t>(std::max(cfg.num_coordinated_bs, 0)),
          pb.get<double>());
    } else if (pb.is_array()) {
      for (const auto& p : pb) {
        cfg.power_budget.push_back(require_number(p, "network.power_budget"));
      }
    } else {
      fail_field("network.power_budget", "expected number or array");
    }
  } else {
    cfg.power_budget.assign(
        static_cast<size_t>(std::max(cfg.num_coordinated_bs, 0)), 1.0);
  }
  if (net.contains("user_weights")) {
    if (!net.at("user_weights").is_array()) {
      fail_field("network.user_weights", "expected array");
    }
    for (const auto& w : net.at("user_weights")) {
      cfg.user_weights.push_back(require_number(w, "network.user_weights"));
    }
  }
  cfg.stop_tol = number_or(net, "stop_tol", cfg.stop_tol);
  cfg.max_outer_iters = int_or(net, "max_outer_iters", cfg.max_outer_iters);
  cfg.bisection_tol = number_or(net, "bisection_tol", cfg.bisection_tol);
  cfg.psd_tol = number_or(net, "psd_tol", cfg.psd_tol);
  cfg.sbf_inner_sweeps =
      int_or(net, "sbf_inner_sweeps", cfg.sbf_inner_sweeps);
  cfg.icbf_inner_iters =
      int_or(net, "icbf_inner_iters", cfg.icbf_inner_iters);

  if (root.contains("placement")) {
    const json& pl = root.at("placement");
    if (!pl.is_object()) {
      fail_field("placement", "expected object");
    }
    spec.placement.inter_site_distance = number_or(
        pl, "inter_site_distance", spec.placement.inter_site_distance);
    spec.placement.user_distance_min =
        number_or(pl, "user_distance_min", spec.placement.user_distance_min);
    spec.placement.user_distance_max =
        number_or(pl, "user_distance_max", spec.placement.user_distance_max);
  }

  if (root.contains("fading")) {
    const json& fd = root.at("fading");
    if (!fd.is_object()) {
      fail_field("fading", "expected object");
    }
    spec.fading.pathloss_ref_distance = number_or(
        fd, "pathloss_ref_distance", spec.fading.pathloss_ref_distance);
    spec.fading.pathloss_exponent =
        number_or(fd, "pathloss_exponent", spec.fading.pathloss_exponent);
    spec.fading.shadowing_std_db =
        number_or(fd, "shadowing_std_db", spec.fading.shadowing_std_db);
    spec.fading.other_bs_power =
        number_or(fd, "other_bs_power", spec.fading.other_bs_power);
  }

  spec.validate();
  return spec;
}

ExperimentSpec load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open config file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

RunTrace run_single_trial(const ExperimentSpec& spec, Algorithm algo,
                          int snr_index, int trial) {
  return run_algorithm(spec, algo, make_instance(spec, snr_index, trial));
}

int count_info_units(const RunTrace& trace) {
  int units = 0;
  for (const IterationRecord& rec : trace.records) {
    units += rec.info_units;
  }
  return units;
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec,
                                      int parallel) {
  spec.validate();
  const int n_snr = static_cast<int>(spec.snr_grid_db.size());
  const int n_alg = static_cast<int>(spec.algorithms.size());
  const int total = n_snr * spec.trials;
  std::vector<TrialResult> cells(
      static_cast<size_t>(n_alg) * n_snr * spec.trials);

  int workers = parallel > 0
                    ? parallel
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, total));

  std::atomic<int> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;

  const auto body = [&]() {
    for (;;) {
      const int item = next.fetch_add(1);
      if (item >= total) {
        return;
      }
      const int s = item / spec.trials;
      const int trial = item % spec.trials;
      try {
        const TrialInstance inst = make_instance(spec, s, trial);
        for (int a = 0; a < n_alg; ++a) {
          const RunTrace trace =
              run_algorithm(spec, spec.algorithms[static_cast<size_t>(a)],
                            inst);
          TrialResult& cell =
              cells[(static_cast<size_t>(a) * n_snr + s) * spec.trials +
                    trial];
          cell.sum_rate = trace.final_sum_rate;
          cell.iterations = trace.outer_iterations;
          cell.info_units = trace.total_info_units;
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) {
          first_error = std::current_exception();
        }
      }
    }
  };

  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) {
    pool.emplace_back(body);
  }
  body();
  for (auto& th : pool) {
    th.join();
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }

  // Fixed-order aggregation: identical output for any worker count.
  std::vector<ResultRow> rows;
  for (int a = 0; a < n_alg; ++a) {
    for (int s = 0; s < n_snr; ++s) {
      const TrialResult* base =
          &cells[(static_cast<size_t>(a) * n_snr + s) * spec.trials];
      double mean = 0.0, mean_it = 0.0, mean_units = 0.0;
      for (int t = 0; t < spec.trials; ++t) {
        mean += base[t].sum_rate;
        mean_it += base[t].iterations;
        mean_units += base[t].info_units;
      }
      mean /= spec.trials;
      mean_it /= spec.trials;
      mean_units /= spec.trials;
      double var = 0.0;
      for (int t = 0; t < spec.trials; ++t) {
        var += (base[t].sum_rate - mean) * (base[t].sum_rate - mean);
      }
      const double stderr_ =
          spec.trials > 1
              ? std::sqrt(var / (spec.trials - 1) / spec.trials)
              : 0.0;
      ResultRow row;
      row.algorithm = algorithm_name(spec.algorithms[static_cast<size_t>(a)]);
      row.snr_db = spec.snr_grid_db[static_cast<size_t>(s)];
      row.mean_sum_rate = mean;
      row.rate_stderr = stderr_;
      row.mean_iterations = mean_it;
      row.mean_info_units = mean_units;
      row.trials = spec.trials;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string format_results_csv(const std::vector<ResultRow>& rows) {
  std::string out =
      "algorithm,snr_db,mean_sum_rate,rate_stderr,mean_iterations,"
      "mean_info_units,trials\n";
  for (const ResultRow& r : rows) {
    out += r.algorithm;
    out += ',';
    out += fmt6(r.snr_db);
    out += ',';
    out += fmt6(r.mean_sum_rate);
    out += ',';
    out += fmt6(r.rate_stderr);
    out += ',';
    out += fmt6(r.mean_iterations);
    out += ',';
    out += fmt6(r.mean_info_units);
    out += ',';
    out += std::to_string(r.trials);
    out += '\n';
  }
  return out;
}

std::string format_results_json(const std::vector<ResultRow>& rows) {
  // Hand-rolled so numbers match the CSV formatting exactly.
  std::string out = "[\n";
  for (size_t k = 0; k < rows.size(); ++k) {
    const ResultRow& r = rows[k];
    out += "  {\"algorithm\":\"" + r.algorithm + "\"";
    out += ",\"snr_db\":" + fmt6(r.snr_db);
    out += ",\"mean_sum_rate\":" + fmt6(r.mean_sum_rate);
    out += ",\"rate_stderr\":" + fmt6(r.rate_stderr);
    out += ",\"mean_iterations\":" + fmt6(r.mean_iterations);
    out += ",\"mean_info_units\":" + fmt6(r.mean_info_units);
    out += ",\"trials\":" + std::to_string(r.trials);
    out += k + 1 < rows.size() ? "},\n" : "}\n";
  }
  out += "]\n";
  return out;
}

void emit_results(const std::vector<ResultRow>& rows,
                  const std::string& format, const std::string& path) {
  if (rows.empty()) {
    throw ConfigError("refusing to emit an empty result set");
  }
  std::string text;
  if (format == "csv") {
    text = format_results_csv(rows);
  } else if (format == "json") {
    text = format_results_json(rows);
  } else {
    throw ConfigError("unknown output format '" + format +
                      "' (expected csv or json)");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open output file: " + path);
  }
  out << text;
  out.flush();
  if (!out) {
    throw IoError("failed writing output file: " + path);
  }
}

std::string fixture_snapshot(const ExperimentSpec& spec) {
  spec.validate();
  const TrialSeeds seeds = seeds_for(spec.seed, 0, 0);
  simenv::PlacementParams placement = spec.placement;
  placement.num_coordinated_bs = spec.network.num_coordinated_bs;
  placement.users_per_cell = spec.network.users_per_cell;
  const simenv::Topology topo =
      simenv::generate_topology(placement, seeds.topology);
  simenv::FadingParams fading = spec.fading;
  fading.snr_db = spec.snr_grid_db[0];
  const ChannelSet ch = simenv::sample_channels(
      topo, fading, spec.network.antennas_per_bs, seeds.channels);

  json snap;
  snap["schema_version"] = 1;
  snap["seed"] = spec.seed;
  snap["snr_db"] = spec.snr_grid_db[0];
  json jtopo;
  jtopo["inter_site_distance"] = topo.inter_site_distance;
  for (const auto& p : topo.bs_positions) {
    jtopo["bs_positions"].push_back({p.x, p.y});
  }
  jtopo["coordinated_set"] = topo.coordinated_set;
  for (const auto& p : topo.user_positions) {
    jtopo["user_positions"].push_back({p.x, p.y});
  }
  snap["topology"] = jtopo;
  json jch;
  jch["M"] = ch.M;
  jch["N"] = ch.N;
  jch["K"] = ch.K;
  for (const Vec& h : ch.h) {
    json link;
    for (Eigen::Index k = 0; k < h.size(); ++k) {
      link.push_back({h(k).real(), h(k).imag()});
    }
    jch["h"].push_back(link);
  }
  jch["noise_power"] = ch.noise_power;
  snap["channels"] = jch;
  return snap.dump(2) + "\n";
}

bool verify_fixture(const ExperimentSpec& spec, const std::string& snapshot,
                    double tol, std::string* diagnostic) {
  const auto mismatch = [&](const std::string& what) {
    if (diagnostic != nullptr) {
      *diagnostic = what;
    }
    return false;
  };
  json want;
  try {
    want = json::parse(snapshot);
  } catch (const nlohmann::json::exception& e) {
    return mismatch(std::string("snapshot is not valid JSON: ") + e.what());
  }
  json have;
  try {
    have = json::parse(fixture_snapshot(spec));
  } catch (const Error& e) {
    return mismatch(std::string("regeneration failed: ") + e.what());
  }

  // Structural walk with numeric tolerance.
  const std::function<bool(const json&, const json&, const std::string&)>
      walk = [&](const json& a, const json& b,
                 const std::string& path) -> bool {
    if (a.is_number() && b.is_number()) {
      const double x = a.get<double>(), y = b.get<double>();
      if (std::abs(x - y) > tol * std::max({1.0, std::abs(x), std::abs(y)})) {
        return mismatch("value mismatch at " + path + ": " +
                        std::to_string(x) + " vs " + std::to_string(y));
      }
      return true;
    }
    if (a.type() != b.type()) {
      return mismatch("type mismatch at " + path);
    }
    if (a.is_object()) {
      if (a.size() != b.size()) {
        return mismatch("object size mismatch at " + path);
      }
      for (auto it = a.begin(); it != a.end(); ++it) {
        if (!b.contains(it.key())) {
          return mismatch("missing key " + it.key() + " at " + path);
        }
        if (!walk(it.value(), b.at(it.key()), path + "." + it.key())) {
          return false;
        }
      }
      return true;
    }
    if (a.is_array()) {
      if (a.size() != b.size()) {
        return mismatch("array size mismatch at " + path);
      }
      for (size_t k = 0; k < a.size(); ++k) {
        if (!walk(a[k], b[k], path + "[" + std::to_string(k) + "]")) {
          return false;
        }
      }
      return true;
    }
    if (a != b) {
      return mismatch("value mismatch at " + path);
    }
    return true;
  };
  return walk(want, have, "$");
}

}  // namespace cobeam::harness
