#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sparsechan/bench.hpp"
#include "sparsechan/toml.hpp"

using namespace sparsechan;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config(const std::string& out) {
  ExperimentConfig cfg = default_experiment_config();
  cfg.n_trials = 2;
  cfg.m_obs = 40;
  cfg.probe.length = 40;
  cfg.channel.n_taps = 60;
  cfg.channel.sparsity = 5;
  cfg.noise_grid = {noise_condition_from_dbs("awgn", 15.0,
                                             -std::numeric_limits<double>::infinity(), 0.0),
                    noise_condition_from_dbs("inr40", 15.0, 40.0, 0.002)};
  cfg.output_dir = out;
  cfg.base_seed = 99;
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("default experiment config mirrors the three-condition setup") {
  const ExperimentConfig cfg = default_experiment_config();
  REQUIRE(cfg.noise_grid.size() == 3);
  CHECK(cfg.noise_grid[0].label == "awgn");
  CHECK(cfg.noise_grid[0].noise.q == 0.0);
  CHECK(cfg.noise_grid[1].label == "inr40");
  CHECK(cfg.noise_grid[1].noise.q == doctest::Approx(0.002));
  CHECK(cfg.noise_grid[1].noise.sigma_i2 ==
        doctest::Approx(cfg.noise_grid[1].noise.sigma_w2 * 1e4));
  CHECK(cfg.noise_grid[2].noise.sigma_i2 ==
        doctest::Approx(cfg.noise_grid[2].noise.sigma_w2 * 1e5));
  CHECK(cfg.n_trials == 100);
  CHECK(cfg.m_obs == 300);
  CHECK(cfg.channel.n_taps == 500);
  CHECK(cfg.channel.sparsity == 15);
}

TEST_CASE("config mapping from TOML text") {
  const char* text = R"(
[experiment]
n_trials = 7
m_obs = 50
seed = 5
solvers = ["admm", "omp"]

[probe]
length = 63
modulation = "bpsk"

[channel]
n_taps = 80
sparsity = 6

[[noise]]
label = "quiet"
snr_db = 20.0

[[noise]]
label = "spiky"
snr_db = 20.0
inr_db = 30.0
q = 0.01
)";
  const ExperimentConfig cfg = experiment_config_from_json(toml_to_json(text));
  CHECK(cfg.n_trials == 7);
  CHECK(cfg.m_obs == 50);
  CHECK(cfg.base_seed == 5);
  REQUIRE(cfg.solvers.size() == 2);
  CHECK(cfg.probe.length == 63);
  CHECK(cfg.channel.n_taps == 80);
  REQUIRE(cfg.noise_grid.size() == 2);
  CHECK(cfg.noise_grid[0].noise.sigma_w2 == doctest::Approx(0.01));
  CHECK(cfg.noise_grid[0].noise.sigma_i2 == 0.0);
  CHECK(cfg.noise_grid[1].noise.sigma_i2 ==
        doctest::Approx(0.01 * 1e3).epsilon(1e-12));
  CHECK(cfg.noise_grid[1].noise.q == doctest::Approx(0.01));

  CHECK_THROWS(experiment_config_from_json(
      toml_to_json("[experiment]\nsolvers = [\"bogus\"]\n")));
  CHECK_THROWS(experiment_config_from_json(
      toml_to_json("[probe]\nmodulation = \"qpsk\"\n")));
  CHECK_THROWS(experiment_config_from_json(
      toml_to_json("[[noise]]\nlabel = \"x\"\nq = 0.1\n")));
}

TEST_CASE("config mapping accepts JSON with direct variances") {
  const nlohmann::json j = {
      {"experiment", {{"n_trials", 3}, {"solvers", {"fista"}}}},
      {"noise", {{{"label", "direct"}, {"q", 0.5}, {"sigma_w2", 2.0},
                  {"sigma_i2", 8.0}, {"seed", 77}}}}};
  const ExperimentConfig cfg = experiment_config_from_json(j);
  CHECK(cfg.n_trials == 3);
  REQUIRE(cfg.noise_grid.size() == 1);
  CHECK(cfg.noise_grid[0].noise.sigma_w2 == doctest::Approx(2.0));
  CHECK(cfg.noise_grid[0].noise.sigma_i2 == doctest::Approx(8.0));
  CHECK(cfg.noise_grid[0].noise.seed == 77);
}

TEST_CASE("seed resolution and BENCH_SEED override") {
  ExperimentConfig cfg = default_experiment_config();
  cfg.probe.seed = 0;
  cfg.channel.seed = 1234;
  resolve_seeds(cfg);
  CHECK(cfg.probe.seed != 0);
  CHECK(cfg.channel.seed == 1234);  // explicit seeds are honored
  CHECK(cfg.noise_grid[0].noise.seed != cfg.noise_grid[1].noise.seed);

  ExperimentConfig derived = default_experiment_config();
  derived.base_seed = 7;
  resolve_seeds(derived);
  ExperimentConfig derived2 = default_experiment_config();
  derived2.base_seed = 8;
  resolve_seeds(derived2);
  CHECK(derived.probe.seed != derived2.probe.seed);

  setenv("BENCH_SEED", "31415", 1);
  ExperimentConfig env_cfg = default_experiment_config();
  apply_env_overrides(env_cfg);
  CHECK(env_cfg.base_seed == 31415);
  setenv("BENCH_SEED", "not_a_number", 1);
  CHECK_THROWS(apply_env_overrides(env_cfg));
  unsetenv("BENCH_SEED");
}

TEST_CASE("run_benchmark: cardinality, artifacts, determinism") {
  const fs::path base = fs::temp_directory_path() / "sparsechan_bench_test";
  fs::remove_all(base);

  ExperimentConfig cfg = small_config((base / "run1").string());
  const BenchmarkResult r1 = run_benchmark(cfg);

  // 3 solvers x 2 conditions x 2 trials
  CHECK(r1.records.size() == 12);
  CHECK(r1.summary.size() == 6);
  CHECK(r1.admm_runs.size() == 4);
  for (const TrialRecord& rec : r1.records) CHECK(std::isfinite(rec.nmsd_db));

  const char* names[] = {"trials.csv", "nmsd_trace.csv", "admm_residuals.csv",
                         "cir_snapshots.csv", "summary.csv", "summary.json"};
  for (const char* name : names) CHECK(fs::exists(base / "run1" / name));

  const std::string trials = slurp(base / "run1" / "trials.csv");
  CHECK(trials.rfind("solver,condition,trial,seed,nmsd_db,iterations,converged",
                     0) == 0);
  const std::string summary = slurp(base / "run1" / "summary.csv");
  CHECK(summary.rfind("solver,condition,trials,mean_nmsd_db,mean_iterations",
                      0) == 0);

  // identical config + seed => byte-identical CSVs
  cfg.output_dir = (base / "run2").string();
  run_benchmark(cfg);
  for (const char* name : names) {
    if (std::string(name) == "summary.json") continue;  // carries runtimes
    CHECK(slurp(base / "run1" / name) == slurp(base / "run2" / name));
  }

  // a different seed changes the trial data
  cfg.base_seed = 123;
  cfg.output_dir = (base / "run3").string();
  run_benchmark(cfg);
  CHECK(slurp(base / "run1" / "trials.csv") !=
        slurp(base / "run3" / "trials.csv"));

  fs::remove_all(base);
}

TEST_CASE("run_benchmark single AWGN trial at full size recovers the channel") {
  const fs::path base = fs::temp_directory_path() / "sparsechan_bench_one";
  fs::remove_all(base);
  ExperimentConfig cfg = default_experiment_config();
  cfg.n_trials = 1;
  cfg.noise_grid.resize(1);  // awgn only
  cfg.output_dir = (base / "out").string();
  cfg.write_snapshots = false;
  const BenchmarkResult r = run_benchmark(cfg);
  REQUIRE(r.records.size() == 3);
  for (const TrialRecord& rec : r.records) {
    CHECK(rec.noise_condition == "awgn");
    CHECK(rec.nmsd_db < -10.0);
  }
  fs::remove_all(base);
}

TEST_CASE("run_benchmark honors solver and artifact toggles") {
  const fs::path base = fs::temp_directory_path() / "sparsechan_bench_toggle";
  fs::remove_all(base);
  ExperimentConfig cfg = small_config((base / "out").string());
  cfg.solvers = {"omp"};
  cfg.write_snapshots = false;
  cfg.write_traces = false;
  const BenchmarkResult r = run_benchmark(cfg);
  CHECK(r.records.size() == 4);
  CHECK(r.admm_runs.empty());
  CHECK(fs::exists(base / "out" / "trials.csv"));
  CHECK(!fs::exists(base / "out" / "cir_snapshots.csv"));
  CHECK(!fs::exists(base / "out" / "nmsd_trace.csv"));
  fs::remove_all(base);
}

TEST_CASE("run_benchmark records per-trial solver failures without aborting") {
  const fs::path base = fs::temp_directory_path() / "sparsechan_bench_fail";
  fs::remove_all(base);
  ExperimentConfig cfg = small_config((base / "out").string());
  // sparsity exceeds min(M, N): OMP's iteration count is out of range and
  // every OMP trial throws; the grid must still complete.
  cfg.channel.sparsity = 50;
  cfg.m_obs = 40;
  const BenchmarkResult r = run_benchmark(cfg);
  CHECK(r.records.size() == 12);
  int omp_failures = 0;
  for (const TrialRecord& rec : r.records) {
    if (rec.solver_name == "omp") {
      CHECK(!rec.converged);
      CHECK(rec.iterations == 0);
      ++omp_failures;
    } else {
      CHECK(std::isfinite(rec.nmsd_db));
    }
  }
  CHECK(omp_failures == 4);
  fs::remove_all(base);
}

TEST_CASE("run_benchmark output is independent of the thread count") {
  const fs::path base = fs::temp_directory_path() / "sparsechan_bench_threads";
  fs::remove_all(base);
  ExperimentConfig cfg = small_config((base / "serial").string());
  cfg.threads = 1;
  run_benchmark(cfg);
  cfg.threads = 3;
  cfg.output_dir = (base / "parallel").string();
  run_benchmark(cfg);
  for (const char* name : {"trials.csv", "nmsd_trace.csv", "summary.csv"})
    CHECK(slurp(base / "serial" / name) == slurp(base / "parallel" / name));
  fs::remove_all(base);
}

TEST_CASE("run_benchmark rejects invalid configs") {
  ExperimentConfig cfg = default_experiment_config();
  cfg.solvers = {};
  CHECK_THROWS(run_benchmark(cfg));
  cfg = default_experiment_config();
  cfg.noise_grid.clear();
  CHECK_THROWS(run_benchmark(cfg));
  cfg = default_experiment_config();
  cfg.solvers = {"admm", "bogus"};
  CHECK_THROWS(run_benchmark(cfg));
}
