#pragma once

#include "sparsechan/linalg.hpp"
#include "sparsechan/solve_result.hpp"

namespace sparsechan::admm {

// Tunables of the linearized-ADMM solver for
//   min_x  tau ||y - A x||_1 + ||x||_1.
struct AdmmConfig {
  double tau = 0.0;        // data-fit weight; must be set (> 0)
  double rho0 = 1.0;       // initial penalty
  double t0 = 1.0;         // initial line-search step
  double eta = 1.5;        // backtracking divisor (> 1)
  double eps_abs = 1e-3;   // absolute stopping tolerance
  double eps_rel = 1e-2;   // relative stopping tolerance
  // Residual-balance ratio (> 1). The dual residual carries a factor of
  // A^H, so with unnormalized convolution operators (||A|| ~ 30 for the
  // default probe) a small ratio misreads the scales and shrinks the
  // penalty until the iteration stalls; the default stays above that
  // amplification.
  double xi = 100.0;
  double delta_incr = 2.0; // penalty growth factor (> 1)
  double delta_decr = 2.0; // penalty shrink divisor (> 1); applied as rho/delta
  int max_iter = 500;
  int max_backtrack = 60;
};

// Per-iteration variables of one solve.
struct AdmmState {
  ComplexVector x;      // estimate, length N
  ComplexVector z;      // auxiliary variable, length M
  ComplexVector gamma;  // dual variable, length M
  double rho = 1.0;
  int iter = 0;
  double t_x = 1.0;     // step accepted by the most recent line search
};

struct XUpdate {
  ComplexVector x_new;
  double t_x_used = 0.0;
  int backtrack_count = 0;
};

struct ResidualPair {
  ComplexVector primal;  // A x_new + z_new - y
  ComplexVector dual;    // rho A^H (r_p_new - r_p_old) - (x_new - x_old)/t_x
};

struct TolerancePair {
  double eps_primal = 0.0;
  double eps_dual = 0.0;
};

// Throws std::invalid_argument when a positivity/ordering constraint fails.
void validate(const AdmmConfig& cfg);

// Section-III defaults with the data-dependent weight tau = 1/(0.04 lambda_inf),
// lambda_inf = ||2 A^H y||_inf. Falls back to tau = 1 when y = 0.
AdmmConfig default_config(const MeasurementModel& model);

// x = 0, z = y - A x = y, gamma = 0, rho = rho0.
AdmmState initialize(const MeasurementModel& model, const AdmmConfig& cfg);

// Backtracking line search on the proximal x-step: tries t = t0/eta^l for
// l = 0, 1, ... and accepts the first candidate
//   S_{t/rho}(x - (t/rho) grad_f1(x))
// whose cost J does not exceed J(x). Returns x unchanged after
// max_backtrack failed trials.
XUpdate x_update(const AdmmState& state, const MeasurementModel& model,
                 const AdmmConfig& cfg);

// Exact proximal z-step w = S_{tau/rho}(y - A x_new - gamma/rho) guarded by a
// monotone safeguard: returns whichever of {w, z_prev} has the smaller G.
ComplexVector z_update(const AdmmState& state, const ComplexVector& x_new,
                       const MeasurementModel& model, const AdmmConfig& cfg);

// gamma + rho (z_new + A x_new - y)
ComplexVector dual_update(const AdmmState& state, const ComplexVector& x_new,
                          const ComplexVector& z_new,
                          const MeasurementModel& model);

ResidualPair residuals(const AdmmState& state_prev, const AdmmState& state_new,
                       const MeasurementModel& model, double t_x_new);

// eps_p = sqrt(M) eps_abs + eps_rel max{||A x||, ||z||, ||y||}
// eps_d = sqrt(N) eps_abs + eps_rel ||A^H gamma||
TolerancePair tolerances(const AdmmState& state, const MeasurementModel& model,
                         const AdmmConfig& cfg);

// Residual balancing: grow rho when the primal residual dominates, shrink it
// when the dual residual dominates, otherwise leave it unchanged.
double rho_update(double rho, double r_p_norm, double r_d_norm,
                  const AdmmConfig& cfg);

// Full solve: iterates the x/z/dual updates with residual-based stopping and
// penalty adaptation. Deterministic given inputs.
SolveResult solve(const MeasurementModel& model, const AdmmConfig& cfg,
                  const IterationObserver& observer = nullptr);

}  // namespace sparsechan::admm
