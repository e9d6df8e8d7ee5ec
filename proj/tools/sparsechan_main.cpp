// Benchmark CLI for sparse channel estimation under impulsive noise:
// simulate channel/noise realizations, estimate a single instance, run the
// full benchmark grid, or sweep one parameter.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sparsechan/admm.hpp"
#include "sparsechan/baselines.hpp"
#include "sparsechan/bench.hpp"
#include "sparsechan/rng.hpp"

namespace {

using namespace sparsechan;

struct CommonOpts {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out_dir;
  bool quiet = false;
};

ExperimentConfig load_config(const CommonOpts& opts) {
  ExperimentConfig cfg = opts.config_path.empty()
                             ? default_experiment_config()
                             : load_experiment_config(opts.config_path);
  apply_env_overrides(cfg);
  if (opts.seed_set) cfg.base_seed = opts.seed;
  if (!opts.out_dir.empty()) cfg.output_dir = opts.out_dir;
  return cfg;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

int run_simulate(const CommonOpts& opts, int blocks) {
  ExperimentConfig cfg = load_config(opts);
  resolve_seeds(cfg);
  if (blocks <= 0) blocks = cfg.n_trials;

  namespace fs = std::filesystem;
  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    std::fprintf(stderr, "error: cannot create output directory %s\n",
                 dir.string().c_str());
    return 1;
  }

  const ComplexVector probe = generate_probe(cfg.probe);
  {
    std::ofstream out(dir / "probe.csv", std::ios::binary);
    out << "index,symbol\n";
    for (std::size_t i = 0; i < probe.size(); ++i)
      out << i << "," << fmt(probe[i].real()) << "\n";
  }
  {
    const auto cir = generate_channel(cfg.channel, blocks);
    std::ofstream out(dir / "channel.csv", std::ios::binary);
    out << "block,tap,re,im,mag\n";
    for (int b = 0; b < blocks; ++b)
      for (int t = 0; t < cfg.channel.n_taps; ++t) {
        const Complex c = cir[b][t];
        if (c == Complex(0.0, 0.0)) continue;
        out << b << "," << t << "," << fmt(c.real()) << "," << fmt(c.imag())
            << "," << fmt(std::abs(c)) << "\n";
      }
  }
  {
    std::ofstream out(dir / "noise.csv", std::ios::binary);
    out << "condition,index,re,im\n";
    for (const NoiseCondition& cond : cfg.noise_grid) {
      NoiseConfig noise = cond.noise;
      noise.seed = mix_seed(cond.noise.seed, 0);
      const ComplexVector n = generate_gmn(cfg.m_obs, noise);
      for (int i = 0; i < cfg.m_obs; ++i)
        out << cond.label << "," << i << "," << fmt(n[i].real()) << ","
            << fmt(n[i].imag()) << "\n";
    }
  }
  if (!opts.quiet)
    std::printf("wrote probe.csv, channel.csv, noise.csv to %s\n",
                dir.string().c_str());
  return 0;
}

int run_estimate(const CommonOpts& opts, const std::string& solver,
                 const std::string& condition) {
  ExperimentConfig cfg = load_config(opts);
  resolve_seeds(cfg);

  const NoiseCondition* cond = &cfg.noise_grid.front();
  if (!condition.empty()) {
    cond = nullptr;
    for (const NoiseCondition& c : cfg.noise_grid)
      if (c.label == condition) cond = &c;
    if (!cond) {
      std::fprintf(stderr, "error: unknown condition '%s'\n", condition.c_str());
      return 1;
    }
  }

  const ComplexVector probe = generate_probe(cfg.probe);
  const ComplexVector x_true = generate_channel(cfg.channel, 1).front();
  NoiseConfig noise = cond->noise;
  noise.seed = mix_seed(cond->noise.seed, 0);
  const SimulatedInstance inst =
      synthesize_instance(probe, x_true, noise, cfg.m_obs);

  SolveResult result;
  if (solver == "admm") {
    admm::AdmmConfig acfg = admm::default_config(inst.model);
    acfg.tau *= cfg.admm_tau_scale;
    result = admm::solve(inst.model, acfg);
  } else if (solver == "omp") {
    result = omp_solve(inst.model, OmpConfig{cfg.channel.sparsity});
  } else if (solver == "fista") {
    FistaConfig fcfg;
    fcfg.lambda = 0.01 * lambda_inf(inst.model);
    result = fista_solve(inst.model, fcfg);
  } else {
    std::fprintf(stderr, "error: unknown solver '%s'\n", solver.c_str());
    return 1;
  }

  std::printf("solver=%s condition=%s nmsd_db=%.4f iterations=%d converged=%d\n",
              solver.c_str(), cond->label.c_str(),
              nmsd(inst.x_true, result.x_hat), result.iterations,
              result.converged ? 1 : 0);
  return 0;
}

int run_bench(const CommonOpts& opts, int trials, int threads) {
  ExperimentConfig cfg = load_config(opts);
  if (trials > 0) cfg.n_trials = trials;
  if (threads > 0) cfg.threads = threads;
  run_benchmark(cfg, opts.quiet);
  if (!opts.quiet)
    std::printf("artifacts written to %s\n", cfg.output_dir.c_str());
  return 0;
}

int run_sweep(const CommonOpts& opts, const std::string& param,
              const std::vector<double>& values, int trials, double snr_db,
              double inr_db, double q) {
  if (values.empty()) {
    std::fprintf(stderr, "error: sweep needs --values\n");
    return 1;
  }
  ExperimentConfig base = load_config(opts);
  if (trials > 0) base.n_trials = trials;
  base.write_snapshots = false;
  base.write_traces = false;

  namespace fs = std::filesystem;
  const fs::path dir(base.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    std::fprintf(stderr, "error: cannot create output directory %s\n",
                 dir.string().c_str());
    return 1;
  }

  std::ofstream out(dir / "sweep.csv", std::ios::binary);
  out << "param,value,solver,condition,mean_nmsd_db,mean_iterations\n";
  for (double value : values) {
    ExperimentConfig cfg = base;
    char tag[64];
    std::snprintf(tag, sizeof(tag), "%s_%g", param.c_str(), value);
    cfg.output_dir = (dir / "sweep_runs" / tag).string();
    if (param == "inr") {
      cfg.noise_grid = {noise_condition_from_dbs(tag, snr_db, value, q)};
    } else if (param == "snr") {
      cfg.noise_grid = {noise_condition_from_dbs(
          tag, value, -std::numeric_limits<double>::infinity(), 0.0)};
    } else if (param == "q") {
      cfg.noise_grid = {noise_condition_from_dbs(tag, snr_db, inr_db, value)};
    } else if (param == "tau") {
      cfg.admm_tau_scale = value;  // conditions stay as configured
    } else {
      std::fprintf(stderr, "error: unknown sweep param '%s'\n", param.c_str());
      return 1;
    }
    const BenchmarkResult result = run_benchmark(cfg, true);
    for (const SummaryRow& row : result.summary)
      out << param << "," << fmt(value) << "," << row.solver_name << ","
          << row.noise_condition << "," << fmt(row.mean_nmsd_db) << ","
          << fmt(row.mean_iterations) << "\n";
    if (!opts.quiet)
      std::printf("%s = %g done (%d trials)\n", param.c_str(), value,
                  cfg.n_trials);
  }
  if (!opts.quiet)
    std::printf("wrote %s\n", (dir / "sweep.csv").string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Sparse channel estimation benchmark: robust l1-l1 ADMM vs OMP and "
      "FISTA under Gaussian-mixture impulsive noise"};
  app.require_subcommand(1);

  CommonOpts opts;
  app.add_option("--config", opts.config_path,
                 "Experiment config file (.toml or .json)");
  auto* seed_opt =
      app.add_option("--seed", opts.seed, "Override the experiment base seed");
  app.add_option("--out", opts.out_dir, "Override the output directory");
  app.add_flag("--quiet", opts.quiet, "Suppress progress output");

  auto* simulate =
      app.add_subcommand("simulate", "Emit channel and noise realizations");
  int blocks = 0;
  simulate->add_option("--blocks", blocks,
                       "Number of channel blocks (default: n_trials)");

  auto* estimate = app.add_subcommand(
      "estimate", "Run one solver on one synthesized instance");
  std::string solver = "admm";
  std::string condition;
  estimate->add_option("--solver", solver, "Solver: admm, omp, or fista");
  estimate->add_option("--condition", condition,
                       "Noise condition label (default: first in grid)");

  auto* benchmark =
      app.add_subcommand("benchmark", "Run the full benchmark grid");
  int trials = 0;
  int threads = 0;
  benchmark->add_option("--trials", trials, "Override the number of trials");
  benchmark->add_option("--threads", threads, "Worker threads (0 = auto)");

  auto* sweep = app.add_subcommand(
      "sweep", "Vary one parameter (inr, snr, q in dB/probability; tau as a "
               "multiplier on the derived weight) and emit curve data");
  std::string param = "inr";
  std::vector<double> values;
  int sweep_trials = 20;
  double sweep_snr = 15.0, sweep_inr = 40.0, sweep_q = 0.002;
  sweep->add_option("--param", param, "Parameter to sweep: inr, snr, q, tau");
  sweep->add_option("--values", values, "Comma-separated values")
      ->delimiter(',');
  sweep->add_option("--trials", sweep_trials, "Trials per sweep point");
  sweep->add_option("--snr", sweep_snr, "Fixed SNR in dB (inr and q sweeps)");
  sweep->add_option("--inr", sweep_inr, "Fixed INR in dB (q sweep)");
  sweep->add_option("--q", sweep_q, "Fixed impulse probability (inr sweep)");

  CLI11_PARSE(app, argc, argv);
  opts.seed_set = seed_opt->count() > 0;

  try {
    if (simulate->parsed()) return run_simulate(opts, blocks);
    if (estimate->parsed()) return run_estimate(opts, solver, condition);
    if (benchmark->parsed()) return run_bench(opts, trials, threads);
    if (sweep->parsed())
      return run_sweep(opts, param, values, sweep_trials, sweep_snr, sweep_inr,
                       sweep_q);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
