// Command-line front end: run experiment files, validate configs, dump
// single-trial traces, and emit/verify channel fixtures.  Errors go to
// stderr as one-line JSON so callers can parse failures.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "cobeam/harness.hpp"

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out += c;
    }
  }
  return out;
}

void print_error(const std::string& kind, const std::string& message) {
  std::cerr << "{\"error\":\"" << json_escape(kind) << "\",\"message\":\""
            << json_escape(message) << "\"}\n";
}

// Precedence: --seed flag, then COBEAM_SEED, then the config file.
void apply_seed(cobeam::harness::ExperimentSpec& spec, bool flag_given,
                std::uint64_t flag_value) {
  if (flag_given) {
    spec.seed = flag_value;
    return;
  }
  if (const char* env = std::getenv("COBEAM_SEED")) {
    spec.seed = std::strtoull(env, nullptr, 10);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw cobeam::IoError("cannot open file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coordinated multi-cell downlink beamforming experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed_flag = 0;
  std::string out_path;
  std::string format = "csv";
  int trials_flag = 0;
  int parallel = 0;
  std::string algorithm = "sbf";
  int snr_index = 0;
  int trial = 0;
  std::string verify_path;

  CLI::App* run = app.add_subcommand("run", "Execute an experiment file");
  run->add_option("--config", config_path, "JSON experiment file")
      ->required();
  run->add_option("--seed", seed_flag, "Master seed override");
  run->add_option("--out", out_path, "Output path override");
  run->add_option("--format", format, "Output format (csv|json)")
      ->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--trials", trials_flag, "Trial count override");
  run->add_option("--parallel", parallel,
                  "Worker threads (0 = hardware concurrency)");

  CLI::App* validate =
      app.add_subcommand("validate", "Check a config file and exit");
  validate->add_option("--config", config_path, "JSON experiment file")
      ->required();

  CLI::App* trace = app.add_subcommand(
      "trace", "Run one trial and dump per-iteration records");
  trace->add_option("--config", config_path, "JSON experiment file")
      ->required();
  trace->add_option("--seed", seed_flag, "Master seed override");
  trace->add_option("--algorithm", algorithm,
                    "Algorithm (ssca|sbf|icbf|zf|mf)");
  trace->add_option("--snr-index", snr_index, "Index into snr_grid_db");
  trace->add_option("--trial", trial, "Trial number");

  CLI::App* fixtures = app.add_subcommand(
      "fixtures", "Emit or verify topology/channel snapshots");
  fixtures->add_option("--config", config_path, "JSON experiment file")
      ->required();
  fixtures->add_option("--seed", seed_flag, "Master seed override");
  fixtures->add_option("--out", out_path, "Write snapshot to this path");
  fixtures->add_option("--verify", verify_path,
                       "Compare a stored snapshot against regeneration");

  CLI11_PARSE(app, argc, argv);

  try {
    namespace hn = cobeam::harness;
    hn::ExperimentSpec spec = hn::load_spec(config_path);

    if (*validate) {
      std::cout << "ok: scenario=" << spec.scenario
                << " algorithms=" << spec.algorithms.size()
                << " snr_points=" << spec.snr_grid_db.size()
                << " trials=" << spec.trials << "\n";
      return 0;
    }

    bool seed_given = false;
    if (*run) {
      seed_given = run->count("--seed") > 0;
    } else if (*trace) {
      seed_given = trace->count("--seed") > 0;
    } else if (*fixtures) {
      seed_given = fixtures->count("--seed") > 0;
    }
    apply_seed(spec, seed_given, seed_flag);

    if (*run) {
      if (trials_flag > 0) {
        spec.trials = trials_flag;
      }
      if (!out_path.empty()) {
        spec.output = out_path;
      }
      const auto rows = hn::run_experiment(spec, parallel);
      hn::emit_results(rows, format, spec.output);
      std::cout << "wrote " << rows.size() << " rows to " << spec.output
                << "\n";
      return 0;
    }

    if (*trace) {
      const hn::Algorithm algo = hn::parse_algorithm(algorithm);
      if (snr_index < 0 ||
          snr_index >= static_cast<int>(spec.snr_grid_db.size())) {
        throw cobeam::ConfigError("--snr-index out of range");
      }
      const cobeam::RunTrace tr =
          hn::run_single_trial(spec, algo, snr_index, trial);
      std::printf("# algorithm=%s snr_db=%g trial=%d seed=%llu\n", algorithm.c_str(),
                  spec.snr_grid_db[static_cast<size_t>(snr_index)], trial,
                  static_cast<unsigned long long>(spec.seed));
      std::printf("iter\tbs\tsum_rate\tbound\taccepted\tinfo\twall_s\n");
      for (const auto& rec : tr.records) {
        std::printf("%d\t%d\t%.9g\t%.9g\t%d\t%d\t%.3f\n", rec.iter,
                    rec.active_bs, rec.sum_rate, rec.bound,
                    rec.accepted ? 1 : 0, rec.info_units, rec.wall_time);
      }
      std::printf(
          "final sum_rate=%.9g converged=%d iterations=%d info_units=%d "
          "kkt_residual=%.3g\n",
          tr.final_sum_rate, tr.converged ? 1 : 0, tr.outer_iterations,
          tr.total_info_units, tr.kkt_residual);
      return 0;
    }

    if (*fixtures) {
      if (!verify_path.empty()) {
        std::string diag;
        if (hn::verify_fixture(spec, read_file(verify_path), 1e-12, &diag)) {
          std::cout << "fixture ok: " << verify_path << "\n";
          return 0;
        }
        print_error("FixtureMismatch", diag);
        return 1;
      }
      const std::string snap = hn::fixture_snapshot(spec);
      if (out_path.empty()) {
        std::cout << snap;
      } else {
        std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
        if (!out) {
          throw cobeam::IoError("cannot open output file: " + out_path);
        }
        out << snap;
        std::cout << "wrote fixture to " << out_path << "\n";
      }
      return 0;
    }
  } catch (const cobeam::ConfigError& e) {
    print_error("ConfigError", e.what());
    return 1;
  } catch (const cobeam::IoError& e) {
    print_error("IoError", e.what());
    return 1;
  } catch (const cobeam::Error& e) {
    print_error("Error", e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("Unexpected", e.what());
    return 2;
  }
  return 0;
}
