#pragma once

#include "sparsechan/linalg.hpp"
#include "sparsechan/solve_result.hpp"

namespace sparsechan {

struct OmpConfig {
  int num_iterations = 1;  // equals the target support size
};

// FISTA on the squared-loss lasso (1/2)||y - A x||_2^2 + lambda ||x||_1 with
// backtracking on the quadratic upper-bound condition.
struct FistaConfig {
  double lambda = 0.0;   // l1 weight; must be set (> 0)
  double t0 = 1.0;       // initial step
  double eta = 1.5;      // backtracking divisor (> 1)
  int max_iter = 500;
  double rel_tol = 1e-6; // stop when the relative iterate change drops below
};

// lambda_inf = ||2 A^H y||_inf; the regularization scale used to derive
// lambda = 0.01 lambda_inf and tau = 1/(0.04 lambda_inf).
double lambda_inf(const MeasurementModel& model);

// Orthogonal matching pursuit: greedily selects the column with the largest
// |A^H r| correlation, refits by least squares on the selected support, and
// repeats. Returns an estimate with at most cfg.num_iterations nonzeros
// (fewer when the residual hits zero early).
SolveResult omp_solve(const MeasurementModel& model, const OmpConfig& cfg,
                      const IterationObserver& observer = nullptr);

// Monotone FISTA: accelerated proximal gradient with momentum restartable
// bookkeeping and an objective-monotone safeguard, so the recorded objective
// history never increases.
SolveResult fista_solve(const MeasurementModel& model, const FistaConfig& cfg,
                        const IterationObserver& observer = nullptr);

}  // namespace sparsechan
