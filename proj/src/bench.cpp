#include "sparsechan/bench.hpp"

#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

#include "sparsechan/admm.hpp"
#include "sparsechan/baselines.hpp"
#include "sparsechan/rng.hpp"
#include "sparsechan/toml.hpp"

namespace sparsechan {

namespace {

using nlohmann::json;

constexpr std::uint64_t kProbeSeedTag = 101;
constexpr std::uint64_t kChannelSeedTag = 202;
constexpr std::uint64_t kNoiseSeedTag = 303;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

// RFC-4180 quoting for text fields (labels come from user configs).
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

NoiseCondition noise_condition_from_dbs(const std::string& label, double snr_db,
                                        double inr_db, double q) {
  NoiseCondition cond;
  cond.label = label;
  cond.noise.q = q;
  cond.noise.sigma_w2 = std::pow(10.0, -snr_db / 10.0);
  cond.noise.sigma_i2 =
      std::isfinite(inr_db) ? cond.noise.sigma_w2 * std::pow(10.0, inr_db / 10.0)
                            : 0.0;
  cond.noise.seed = 0;
  return cond;
}

ExperimentConfig default_experiment_config() {
  ExperimentConfig cfg;
  cfg.noise_grid = {
      noise_condition_from_dbs("awgn", 15.0, -std::numeric_limits<double>::infinity(), 0.0),
      noise_condition_from_dbs("inr40", 15.0, 40.0, 0.002),
      noise_condition_from_dbs("inr50", 15.0, 50.0, 0.002),
  };
  return cfg;
}

ExperimentConfig experiment_config_from_json(const json& tree) {
  ExperimentConfig cfg = default_experiment_config();

  if (tree.contains("experiment")) {
    const json& e = tree.at("experiment");
    if (e.contains("n_trials")) cfg.n_trials = e.at("n_trials").get<int>();
    if (e.contains("m_obs")) cfg.m_obs = e.at("m_obs").get<int>();
    if (e.contains("seed")) cfg.base_seed = e.at("seed").get<std::uint64_t>();
    if (e.contains("output_dir")) cfg.output_dir = e.at("output_dir").get<std::string>();
    if (e.contains("threads")) cfg.threads = e.at("threads").get<int>();
    if (e.contains("write_snapshots")) cfg.write_snapshots = e.at("write_snapshots").get<bool>();
    if (e.contains("write_traces")) cfg.write_traces = e.at("write_traces").get<bool>();
    if (e.contains("admm_tau_scale")) cfg.admm_tau_scale = e.at("admm_tau_scale").get<double>();
    if (e.contains("solvers")) {
      cfg.solvers.clear();
      for (const json& s : e.at("solvers")) cfg.solvers.push_back(s.get<std::string>());
    }
  }
  if (tree.contains("probe")) {
    const json& p = tree.at("probe");
    if (p.contains("length")) cfg.probe.length = p.at("length").get<int>();
    if (p.contains("seed")) cfg.probe.seed = p.at("seed").get<std::uint64_t>();
    if (p.contains("modulation") &&
        p.at("modulation").get<std::string>() != "bpsk")
      throw std::runtime_error("config: only bpsk modulation is supported");
  }
  if (tree.contains("channel")) {
    const json& c = tree.at("channel");
    if (c.contains("n_taps")) cfg.channel.n_taps = c.at("n_taps").get<int>();
    if (c.contains("sparsity")) cfg.channel.sparsity = c.at("sparsity").get<int>();
    if (c.contains("amplitude_decay")) cfg.channel.amplitude_decay = c.at("amplitude_decay").get<double>();
    if (c.contains("fading_rate")) cfg.channel.fading_rate = c.at("fading_rate").get<double>();
    if (c.contains("seed")) cfg.channel.seed = c.at("seed").get<std::uint64_t>();
  }
  if (tree.contains("noise")) {
    cfg.noise_grid.clear();
    int index = 0;
    for (const json& n : tree.at("noise")) {
      NoiseCondition cond;
      cond.label = n.contains("label") ? n.at("label").get<std::string>()
                                       : "cond" + std::to_string(index);
      const double q = n.contains("q") ? n.at("q").get<double>() : 0.0;
      if (n.contains("sigma_w2")) {
        cond.noise.q = q;
        cond.noise.sigma_w2 = n.at("sigma_w2").get<double>();
        cond.noise.sigma_i2 = n.contains("sigma_i2") ? n.at("sigma_i2").get<double>() : 0.0;
      } else if (n.contains("snr_db")) {
        const double inr = n.contains("inr_db")
                               ? n.at("inr_db").get<double>()
                               : -std::numeric_limits<double>::infinity();
        cond = noise_condition_from_dbs(cond.label, n.at("snr_db").get<double>(), inr, q);
      } else {
        throw std::runtime_error("config: noise entry needs snr_db or sigma_w2");
      }
      if (n.contains("seed")) cond.noise.seed = n.at("seed").get<std::uint64_t>();
      cfg.noise_grid.push_back(cond);
      ++index;
    }
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  json tree;
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
    tree = json::parse(text);
  else
    tree = toml_to_json(text);
  return experiment_config_from_json(tree);
}

void apply_env_overrides(ExperimentConfig& cfg) {
  if (const char* env = std::getenv("BENCH_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0')
      throw std::runtime_error("BENCH_SEED must be an unsigned integer");
    cfg.base_seed = v;
  }
}

void resolve_seeds(ExperimentConfig& cfg) {
  if (cfg.probe.seed == 0) cfg.probe.seed = mix_seed(cfg.base_seed, kProbeSeedTag);
  if (cfg.channel.seed == 0)
    cfg.channel.seed = mix_seed(cfg.base_seed, kChannelSeedTag);
  for (std::size_t i = 0; i < cfg.noise_grid.size(); ++i)
    if (cfg.noise_grid[i].noise.seed == 0)
      cfg.noise_grid[i].noise.seed = mix_seed(cfg.base_seed, kNoiseSeedTag + i);
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.solvers.empty()) throw std::runtime_error("config: no solvers");
  for (const std::string& s : cfg.solvers)
    if (s != "admm" && s != "omp" && s != "fista")
      throw std::runtime_error("config: unknown solver '" + s + "'");
  if (cfg.noise_grid.empty()) throw std::runtime_error("config: empty noise grid");
  if (cfg.n_trials < 1) throw std::runtime_error("config: n_trials >= 1");
  if (cfg.m_obs < 1) throw std::runtime_error("config: m_obs >= 1");
  if (!(cfg.admm_tau_scale > 0.0))
    throw std::runtime_error("config: admm_tau_scale must be > 0");
}

namespace {

struct TracePoint {
  int iter;
  double nmsd_db;
};

struct JobOutput {
  std::vector<TrialRecord> records;                      // one per solver
  std::vector<std::vector<TracePoint>> traces;           // one per solver
  std::vector<std::vector<double>> snapshots;            // |x_hat| per solver
  std::vector<double> true_mags;
  // ADMM residual trace: objective, r_p, r_d, rho per iteration.
  std::vector<std::array<double, 4>> admm_trace;
  AdmmRunDiagnostics admm_diag;
  bool has_admm = false;
};

void run_parallel(int n_jobs, int n_threads,
                  const std::function<void(int)>& body) {
  if (n_threads <= 1) {
    for (int i = 0; i < n_jobs; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int workers = std::min(n_threads, n_jobs);
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n_jobs) return;
        body(i);
      }
    });
  for (std::thread& t : pool) t.join();
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& header) {
    out_.open(path, std::ios::binary);
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    out_ << header << "\n";
  }
  void row(const std::string& line) { out_ << line << "\n"; }

 private:
  std::ofstream out_;
};

}  // namespace

BenchmarkResult run_benchmark(const ExperimentConfig& config, bool quiet) {
  ExperimentConfig cfg = config;
  validate(cfg);
  resolve_seeds(cfg);

  const ComplexVector probe = generate_probe(cfg.probe);
  const ComplexMatrix A =
      build_convolution_matrix(probe, cfg.channel.n_taps, cfg.m_obs);
  const std::vector<ComplexVector> blocks =
      generate_channel(cfg.channel, cfg.n_trials);

  const int n_conditions = static_cast<int>(cfg.noise_grid.size());
  const int n_jobs = n_conditions * cfg.n_trials;
  std::vector<JobOutput> outputs(n_jobs);

  auto run_job = [&](int job) {
    const int ci = job / cfg.n_trials;
    const int ti = job % cfg.n_trials;
    const NoiseCondition& cond = cfg.noise_grid[ci];

    NoiseConfig noise = cond.noise;
    noise.seed = mix_seed(cond.noise.seed, static_cast<std::uint64_t>(ti));
    const SimulatedInstance inst = synthesize_instance(A, blocks[ti], noise);

    JobOutput& out = outputs[job];
    out.true_mags.resize(inst.x_true.size());
    for (std::size_t j = 0; j < inst.x_true.size(); ++j)
      out.true_mags[j] = std::abs(inst.x_true[j]);

    for (const std::string& solver : cfg.solvers) {
      TrialRecord rec;
      rec.solver_name = solver;
      rec.noise_condition = cond.label;
      rec.trial = ti;
      rec.seed = noise.seed;

      std::vector<TracePoint> trace;
      const IterationObserver observer = [&](int it, const ComplexVector& x) {
        trace.push_back({it, nmsd(inst.x_true, x)});
      };

      const auto start = std::chrono::steady_clock::now();
      SolveResult result;
      bool failed = false;
      try {
        if (solver == "admm") {
          admm::AdmmConfig acfg = admm::default_config(inst.model);
          acfg.tau *= cfg.admm_tau_scale;
          result = admm::solve(inst.model, acfg, observer);
        } else if (solver == "omp") {
          OmpConfig ocfg;
          ocfg.num_iterations = cfg.channel.sparsity;
          result = omp_solve(inst.model, ocfg, observer);
        } else {
          FistaConfig fcfg;
          fcfg.lambda = 0.01 * lambda_inf(inst.model);
          result = fista_solve(inst.model, fcfg, observer);
        }
      } catch (const std::exception& e) {
        failed = true;
        if (!quiet)
          std::fprintf(stderr, "trial %d/%s/%s failed: %s\n", ti,
                       cond.label.c_str(), solver.c_str(), e.what());
      }
      const auto stop = std::chrono::steady_clock::now();
      rec.runtime_s = std::chrono::duration<double>(stop - start).count();

      if (failed) {
        rec.converged = false;
        rec.iterations = 0;
        rec.nmsd_db = 0.0;  // score of the all-zero estimate
        result.x_hat.assign(inst.x_true.size(), Complex(0.0, 0.0));
      } else {
        rec.converged = result.converged;
        rec.iterations = result.iterations;
        rec.nmsd_db = nmsd(inst.x_true, result.x_hat);
      }

      if (solver == "admm" && !failed) {
        out.has_admm = true;
        AdmmRunDiagnostics& d = out.admm_diag;
        d.condition = cond.label;
        d.trial = ti;
        d.converged = result.converged;
        d.iterations = result.iterations;
        d.final_eps_primal = result.final_eps_primal;
        d.final_eps_dual = result.final_eps_dual;
        if (!result.primal_residual_history.empty()) {
          d.final_primal = result.primal_residual_history.back();
          d.final_dual = result.dual_residual_history.back();
        }
        d.objective_nonincreasing = true;
        for (std::size_t i = 1; i < result.objective_history.size(); ++i)
          if (result.objective_history[i] > result.objective_history[i - 1])
            d.objective_nonincreasing = false;
        out.admm_trace.reserve(result.objective_history.size());
        for (std::size_t i = 0; i < result.objective_history.size(); ++i)
          out.admm_trace.push_back({result.objective_history[i],
                                    result.primal_residual_history[i],
                                    result.dual_residual_history[i],
                                    result.rho_history[i]});
      }

      std::vector<double> mags(result.x_hat.size());
      for (std::size_t j = 0; j < result.x_hat.size(); ++j)
        mags[j] = std::abs(result.x_hat[j]);
      out.snapshots.push_back(std::move(mags));
      out.traces.push_back(std::move(trace));
      out.records.push_back(std::move(rec));
    }
  };

  int threads = cfg.threads > 0
                    ? cfg.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  run_parallel(n_jobs, threads, run_job);

  // Deterministic collection: solver-major, then condition, then trial.
  BenchmarkResult result;
  for (std::size_t si = 0; si < cfg.solvers.size(); ++si)
    for (int ci = 0; ci < n_conditions; ++ci)
      for (int ti = 0; ti < cfg.n_trials; ++ti)
        result.records.push_back(outputs[ci * cfg.n_trials + ti].records[si]);
  result.summary = aggregate(result.records);
  for (int ci = 0; ci < n_conditions; ++ci)
    for (int ti = 0; ti < cfg.n_trials; ++ti) {
      const JobOutput& out = outputs[ci * cfg.n_trials + ti];
      if (out.has_admm) result.admm_runs.push_back(out.admm_diag);
    }

  // Artifacts.
  namespace fs = std::filesystem;
  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw std::runtime_error("cannot create output directory " + dir.string());

  {
    CsvWriter csv(dir / "trials.csv",
                  "solver,condition,trial,seed,nmsd_db,iterations,converged");
    for (const TrialRecord& r : result.records)
      csv.row(csv_field(r.solver_name) + "," + csv_field(r.noise_condition) + "," +
              std::to_string(r.trial) + "," + std::to_string(r.seed) + "," +
              format_double(r.nmsd_db) + "," + std::to_string(r.iterations) +
              "," + (r.converged ? "1" : "0"));
  }
  if (cfg.write_traces) {
    CsvWriter csv(dir / "nmsd_trace.csv", "solver,condition,trial,iter,nmsd_db");
    for (std::size_t si = 0; si < cfg.solvers.size(); ++si)
      for (int ci = 0; ci < n_conditions; ++ci)
        for (int ti = 0; ti < cfg.n_trials; ++ti)
          for (const TracePoint& p :
               outputs[ci * cfg.n_trials + ti].traces[si])
            csv.row(csv_field(cfg.solvers[si]) + "," +
                    csv_field(cfg.noise_grid[ci].label) + "," +
                    std::to_string(ti) + "," + std::to_string(p.iter) + "," +
                    format_double(p.nmsd_db));
  }
  if (cfg.write_traces) {
    CsvWriter csv(dir / "admm_residuals.csv",
                  "condition,trial,iter,objective,primal_residual,"
                  "dual_residual,rho");
    for (int ci = 0; ci < n_conditions; ++ci)
      for (int ti = 0; ti < cfg.n_trials; ++ti) {
        const JobOutput& out = outputs[ci * cfg.n_trials + ti];
        for (std::size_t it = 0; it < out.admm_trace.size(); ++it)
          csv.row(csv_field(cfg.noise_grid[ci].label) + "," +
                  std::to_string(ti) + "," +
                  std::to_string(it + 1) + "," +
                  format_double(out.admm_trace[it][0]) + "," +
                  format_double(out.admm_trace[it][1]) + "," +
                  format_double(out.admm_trace[it][2]) + "," +
                  format_double(out.admm_trace[it][3]));
      }
  }
  if (cfg.write_snapshots) {
    CsvWriter csv(dir / "cir_snapshots.csv",
                  "solver,condition,trial,tap,true_mag,estimated_mag");
    for (std::size_t si = 0; si < cfg.solvers.size(); ++si)
      for (int ci = 0; ci < n_conditions; ++ci)
        for (int ti = 0; ti < cfg.n_trials; ++ti) {
          const JobOutput& out = outputs[ci * cfg.n_trials + ti];
          const std::vector<double>& est = out.snapshots[si];
          for (std::size_t tap = 0; tap < est.size(); ++tap)
            csv.row(csv_field(cfg.solvers[si]) + "," +
                    csv_field(cfg.noise_grid[ci].label) + "," +
                    std::to_string(ti) + "," + std::to_string(tap) + "," +
                    format_double(out.true_mags[tap]) + "," +
                    format_double(est[tap]));
        }
  }
  {
    CsvWriter csv(dir / "summary.csv",
                  "solver,condition,trials,mean_nmsd_db,mean_iterations");
    for (const SummaryRow& row : result.summary)
      csv.row(csv_field(row.solver_name) + "," +
              csv_field(row.noise_condition) + "," +
              std::to_string(row.trials) + "," +
              format_double(row.mean_nmsd_db) + "," +
              format_double(row.mean_iterations));
  }
  {
    json doc;
    doc["seed"] = cfg.base_seed;
    doc["n_trials"] = cfg.n_trials;
    doc["results"] = json::array();
    for (const SummaryRow& row : result.summary)
      doc["results"].push_back({{"solver", row.solver_name},
                                {"condition", row.noise_condition},
                                {"trials", row.trials},
                                {"mean_nmsd_db", row.mean_nmsd_db},
                                {"mean_iterations", row.mean_iterations},
                                {"mean_runtime_s", row.mean_runtime_s}});
    std::ofstream out(dir / "summary.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write summary.json");
    out << doc.dump(2) << "\n";
  }

  if (!quiet) {
    std::printf("%-8s %-10s %8s %12s %12s\n", "solver", "condition", "trials",
                "mean_nmsd", "mean_iter");
    for (const SummaryRow& row : result.summary)
      std::printf("%-8s %-10s %8d %12.2f %12.1f\n", row.solver_name.c_str(),
                  row.noise_condition.c_str(), row.trials, row.mean_nmsd_db,
                  row.mean_iterations);
  }
  return result;
}

}  // namespace sparsechan
