#pragma once

#include <functional>
#include <vector>

#include "sparsechan/linalg.hpp"

namespace sparsechan {

// Common output of all solvers. History vectors carry one entry per completed
// iteration. The residual and penalty histories are filled by the ADMM solver;
// OMP records the residual 2-norm in objective_history and FISTA records its
// composite objective there.
struct SolveResult {
  ComplexVector x_hat;
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_history;
  std::vector<double> primal_residual_history;
  std::vector<double> dual_residual_history;
  std::vector<double> rho_history;
  // Stopping thresholds at the final iteration (ADMM only).
  double final_eps_primal = 0.0;
  double final_eps_dual = 0.0;
};

// Called once per completed iteration with the current estimate; used by the
// benchmark to record error-vs-iteration traces.
using IterationObserver =
    std::function<void(int iteration, const ComplexVector& x)>;

}  // namespace sparsechan
