#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sparsechan/linalg.hpp"

namespace sparsechan {

// One estimation run's score, keyed by solver and noise condition.
struct TrialRecord {
  std::string solver_name;
  std::string noise_condition;
  int trial = 0;
  std::uint64_t seed = 0;
  double nmsd_db = 0.0;
  int iterations = 0;
  double runtime_s = 0.0;
  bool converged = true;
};

// NMSD = 20 log10(||x_true - x_hat||_2 / ||x_true||_2), clamped below at
// -300 dB so exact matches stay finite. Throws on zero x_true (undefined).
double nmsd(const ComplexVector& x_true, const ComplexVector& x_hat);

struct SummaryRow {
  std::string solver_name;
  std::string noise_condition;
  int trials = 0;
  double mean_nmsd_db = 0.0;
  double mean_iterations = 0.0;
  double mean_runtime_s = 0.0;
};

// Per (solver, condition) means, in order of first appearance. Throws on
// empty input.
std::vector<SummaryRow> aggregate(const std::vector<TrialRecord>& records);

}  // namespace sparsechan
