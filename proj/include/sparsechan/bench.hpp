#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "sparsechan/channel.hpp"
#include "sparsechan/metrics.hpp"

namespace sparsechan {

struct NoiseCondition {
  std::string label;
  NoiseConfig noise;
};

// Full description of one benchmark run. A seed of 0 in probe/channel/noise
// entries means "derive from base_seed", so reseeding the experiment reseeds
// every stream.
struct ExperimentConfig {
  ProbeConfig probe{300, 0};
  ChannelConfig channel{500, 15, 0.02, 0.9, 0};
  std::vector<NoiseCondition> noise_grid;
  std::vector<std::string> solvers = {"admm", "omp", "fista"};
  int n_trials = 100;
  int m_obs = 300;
  std::uint64_t base_seed = 42;
  std::string output_dir = "out";
  int threads = 0;             // 0 = hardware concurrency
  bool write_snapshots = true; // estimated-CIR snapshot CSV
  bool write_traces = true;    // per-iteration trace CSVs
  double admm_tau_scale = 1.0; // multiplier on the derived tau (sweeps)
};

// The three-condition setup: AWGN at 15 dB SNR plus impulsive conditions at
// INR 40 and 50 dB with q = 0.002.
ExperimentConfig default_experiment_config();

// Builds a noise condition from dB-scale parameters, taking the unit-power
// BPSK probe as the signal reference. Pass inr_db = -inf for pure WGN.
NoiseCondition noise_condition_from_dbs(const std::string& label, double snr_db,
                                        double inr_db, double q);

// Maps a parsed config tree (from TOML or JSON) onto ExperimentConfig;
// missing keys keep their defaults. Throws std::runtime_error on unknown
// solvers, bad modulation, or malformed noise entries.
ExperimentConfig experiment_config_from_json(const nlohmann::json& tree);

// Reads a .toml or .json config file.
ExperimentConfig load_experiment_config(const std::string& path);

// BENCH_SEED environment variable overrides base_seed.
void apply_env_overrides(ExperimentConfig& cfg);

// Fills in every seed left at 0 by deriving it from base_seed.
void resolve_seeds(ExperimentConfig& cfg);

void validate(const ExperimentConfig& cfg);

// Convergence diagnostics of one ADMM run inside the benchmark.
struct AdmmRunDiagnostics {
  std::string condition;
  int trial = 0;
  bool converged = false;
  int iterations = 0;
  double final_primal = 0.0;
  double final_dual = 0.0;
  double final_eps_primal = 0.0;
  double final_eps_dual = 0.0;
  bool objective_nonincreasing = true;
};

struct BenchmarkResult {
  std::vector<TrialRecord> records;
  std::vector<SummaryRow> summary;
  std::vector<AdmmRunDiagnostics> admm_runs;
};

// Runs every (trial, condition, solver) combination and writes trials.csv,
// nmsd_trace.csv, admm_residuals.csv, cir_snapshots.csv, summary.csv and
// summary.json under cfg.output_dir. Trials run concurrently when threads
// allow it; collection order is fixed so outputs never depend on scheduling.
// Per-trial solver failures are recorded with converged = false, not fatal.
BenchmarkResult run_benchmark(const ExperimentConfig& cfg, bool quiet = true);

}  // namespace sparsechan
