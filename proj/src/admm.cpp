#include "sparsechan/admm.hpp"

#include <cmath>
#include <stdexcept>

#include "sparsechan/baselines.hpp"
#include "sparsechan/proximal.hpp"

namespace sparsechan::admm {

void validate(const AdmmConfig& cfg) {
  if (!(cfg.tau > 0.0)) throw std::invalid_argument("AdmmConfig: tau must be > 0");
  if (!(cfg.rho0 > 0.0)) throw std::invalid_argument("AdmmConfig: rho0 must be > 0");
  if (!(cfg.t0 > 0.0)) throw std::invalid_argument("AdmmConfig: t0 must be > 0");
  if (!(cfg.eta > 1.0)) throw std::invalid_argument("AdmmConfig: eta must be > 1");
  if (!(cfg.eps_abs > 0.0)) throw std::invalid_argument("AdmmConfig: eps_abs must be > 0");
  if (!(cfg.eps_rel > 0.0)) throw std::invalid_argument("AdmmConfig: eps_rel must be > 0");
  if (!(cfg.xi > 1.0)) throw std::invalid_argument("AdmmConfig: xi must be > 1");
  if (!(cfg.delta_incr > 1.0)) throw std::invalid_argument("AdmmConfig: delta_incr must be > 1");
  if (!(cfg.delta_decr > 1.0)) throw std::invalid_argument("AdmmConfig: delta_decr must be > 1");
  if (cfg.max_iter < 1) throw std::invalid_argument("AdmmConfig: max_iter must be >= 1");
  if (cfg.max_backtrack < 1) throw std::invalid_argument("AdmmConfig: max_backtrack must be >= 1");
}

AdmmConfig default_config(const MeasurementModel& model) {
  AdmmConfig cfg;
  const double linf = lambda_inf(model);
  cfg.tau = linf > 0.0 ? 1.0 / (0.04 * linf) : 1.0;
  return cfg;
}

AdmmState initialize(const MeasurementModel& model, const AdmmConfig& cfg) {
  validate(model);
  validate(cfg);
  AdmmState st;
  st.x.assign(model.num_unknowns(), Complex(0.0, 0.0));
  st.z = model.y;  // z = y - A*0
  st.gamma.assign(model.num_obs(), Complex(0.0, 0.0));
  st.rho = cfg.rho0;
  st.iter = 0;
  st.t_x = cfg.t0;
  return st;
}

XUpdate x_update(const AdmmState& state, const MeasurementModel& model,
                 const AdmmConfig& cfg) {
  const ComplexVector g = grad_f1(state.x, state.z, state.gamma, model, state.rho);
  const double j_prev = objective_j(state.x, model, cfg.tau);
  const int n = model.num_unknowns();

  double t = cfg.t0;
  for (int l = 0; l < cfg.max_backtrack; ++l) {
    const double alpha = t / state.rho;
    ComplexVector cand(n);
    for (int j = 0; j < n; ++j)
      cand[j] = soft_threshold(state.x[j] - alpha * g[j], alpha);
    if (objective_j(cand, model, cfg.tau) <= j_prev)
      return {std::move(cand), t, l};
    t /= cfg.eta;
  }
  return {state.x, t, cfg.max_backtrack};  // stall-safe fallback
}

ComplexVector z_update(const AdmmState& state, const ComplexVector& x_new,
                       const MeasurementModel& model, const AdmmConfig& cfg) {
  // z - grad_g1(z)/rho simplifies to y - A x_new - gamma/rho, the exact
  // minimizer target of the z-subproblem.
  const ComplexVector Ax = matvec(model.A, x_new);
  const int m = model.num_obs();
  ComplexVector base(m);
  for (int i = 0; i < m; ++i)
    base[i] = model.y[i] - Ax[i] - state.gamma[i] / state.rho;
  ComplexVector w = soft_threshold_vec(base, cfg.tau / state.rho);

  const double g_w = objective_g(w, x_new, state.gamma, model, state.rho, cfg.tau);
  const double g_prev =
      objective_g(state.z, x_new, state.gamma, model, state.rho, cfg.tau);
  return g_w <= g_prev ? w : state.z;
}

ComplexVector dual_update(const AdmmState& state, const ComplexVector& x_new,
                          const ComplexVector& z_new,
                          const MeasurementModel& model) {
  const ComplexVector Ax = matvec(model.A, x_new);
  const int m = model.num_obs();
  ComplexVector gamma(m);
  for (int i = 0; i < m; ++i)
    gamma[i] = state.gamma[i] + state.rho * (z_new[i] + Ax[i] - model.y[i]);
  return gamma;
}

ResidualPair residuals(const AdmmState& state_prev, const AdmmState& state_new,
                       const MeasurementModel& model, double t_x_new) {
  const int m = model.num_obs();
  const int n = model.num_unknowns();
  const ComplexVector Ax_new = matvec(model.A, state_new.x);
  const ComplexVector Ax_prev = matvec(model.A, state_prev.x);

  ResidualPair out;
  out.primal.resize(m);
  ComplexVector rp_prev(m), diff(m);
  for (int i = 0; i < m; ++i) {
    out.primal[i] = Ax_new[i] + state_new.z[i] - model.y[i];
    rp_prev[i] = Ax_prev[i] + state_prev.z[i] - model.y[i];
    diff[i] = out.primal[i] - rp_prev[i];
  }
  out.dual = adjoint_matvec(model.A, diff);
  for (int j = 0; j < n; ++j)
    out.dual[j] = state_new.rho * out.dual[j] -
                  (state_new.x[j] - state_prev.x[j]) / t_x_new;
  return out;
}

TolerancePair tolerances(const AdmmState& state, const MeasurementModel& model,
                         const AdmmConfig& cfg) {
  const double ax = norm2(matvec(model.A, state.x));
  const double scale = std::max({ax, norm2(state.z), norm2(model.y)});
  TolerancePair out;
  out.eps_primal = std::sqrt(model.num_obs()) * cfg.eps_abs + cfg.eps_rel * scale;
  out.eps_dual = std::sqrt(model.num_unknowns()) * cfg.eps_abs +
                 cfg.eps_rel * norm2(adjoint_matvec(model.A, state.gamma));
  return out;
}

double rho_update(double rho, double r_p_norm, double r_d_norm,
                  const AdmmConfig& cfg) {
  if (!(rho > 0.0)) throw std::invalid_argument("rho_update: rho must be > 0");
  if (r_p_norm > cfg.xi * r_d_norm) return cfg.delta_incr * rho;
  if (r_d_norm > cfg.xi * r_p_norm) return rho / cfg.delta_decr;
  return rho;
}

SolveResult solve(const MeasurementModel& model, const AdmmConfig& cfg,
                  const IterationObserver& observer) {
  AdmmState st = initialize(model, cfg);
  const int m = model.num_obs();
  const int n = model.num_unknowns();
  const ComplexVector& y = model.y;
  const double y_norm = norm2(y);
  const double sqrt_m = std::sqrt(double(m));
  const double sqrt_n = std::sqrt(double(n));
  const ColumnCache cols(model.A);

  // Quantities carried across iterations so each pass needs a single full
  // adjoint product: A x, the primal residual, A^H r_p, and A^H gamma.
  ComplexVector Ax(m, Complex(0.0, 0.0));
  ComplexVector rp(m, Complex(0.0, 0.0));  // z0 = y - A x0 exactly
  ComplexVector at_rp(n, Complex(0.0, 0.0));
  ComplexVector at_gamma(n, Complex(0.0, 0.0));
  double j_cur = cfg.tau * norm1(y);  // J(0)

  SolveResult res;
  ComplexVector g(n), cand(n), cand_ax, base(m), w(m), rd(n);
  std::vector<int> support;
  support.reserve(n);

  for (int k = 1; k <= cfg.max_iter; ++k) {
    // grad f1(x) = rho A^H r_p + A^H gamma
    for (int j = 0; j < n; ++j) g[j] = st.rho * at_rp[j] + at_gamma[j];

    // Backtracking line search on the proximal candidate. Candidates are
    // sparse, so their products are accumulated column-wise.
    bool accepted = false;
    double t = cfg.t0;
    double t_used = cfg.t0;
    double j_new = j_cur;
    for (int l = 0; l < cfg.max_backtrack; ++l) {
      const double alpha = t / st.rho;
      support.clear();
      for (int j = 0; j < n; ++j) {
        cand[j] = soft_threshold(st.x[j] - alpha * g[j], alpha);
        if (cand[j] != Complex(0.0, 0.0)) support.push_back(j);
      }
      cols.accumulate(cand, support, cand_ax);
      double fit = 0.0, l1 = 0.0;
      for (int i = 0; i < m; ++i) fit += std::abs(y[i] - cand_ax[i]);
      for (int j : support) l1 += std::abs(cand[j]);
      const double j_cand = cfg.tau * fit + l1;
      if (j_cand <= j_cur) {
        accepted = true;
        t_used = t;
        j_new = j_cand;
        break;
      }
      t /= cfg.eta;
    }
    if (!accepted) {  // stall-safe: keep the previous iterate
      cand = st.x;
      cand_ax = Ax;
      t_used = t;
      j_new = j_cur;
    }

    // Exact proximal z-step with monotone safeguard.
    for (int i = 0; i < m; ++i)
      base[i] = y[i] - cand_ax[i] - st.gamma[i] / st.rho;
    double g_w = 0.0, g_prev = 0.0;
    for (int i = 0; i < m; ++i) {
      w[i] = soft_threshold(base[i], cfg.tau / st.rho);
      g_w += 0.5 * st.rho * std::norm(w[i] - base[i]) + cfg.tau * std::abs(w[i]);
      g_prev += 0.5 * st.rho * std::norm(st.z[i] - base[i]) +
                cfg.tau * std::abs(st.z[i]);
    }
    const bool take_w = g_w <= g_prev;
    const ComplexVector& z_new = take_w ? w : st.z;

    // Dual ascent and residuals.
    double rp_norm = 0.0;
    for (int i = 0; i < m; ++i) {
      rp[i] = cand_ax[i] + z_new[i] - y[i];
      st.gamma[i] += st.rho * rp[i];
      rp_norm += std::norm(rp[i]);
    }
    rp_norm = std::sqrt(rp_norm);

    ComplexVector at_rp_new = adjoint_matvec(model.A, rp);
    double rd_norm = 0.0;
    for (int j = 0; j < n; ++j) {
      rd[j] = st.rho * (at_rp_new[j] - at_rp[j]) - (cand[j] - st.x[j]) / t_used;
      rd_norm += std::norm(rd[j]);
      at_gamma[j] += st.rho * at_rp_new[j];
    }
    rd_norm = std::sqrt(rd_norm);
    at_rp = std::move(at_rp_new);

    // Commit the iterate.
    st.x = cand;
    if (take_w) st.z = w;
    Ax = cand_ax;
    j_cur = j_new;
    st.iter = k;
    st.t_x = t_used;

    const double eps_p =
        sqrt_m * cfg.eps_abs +
        cfg.eps_rel * std::max({norm2(Ax), norm2(st.z), y_norm});
    const double eps_d =
        sqrt_n * cfg.eps_abs + cfg.eps_rel * norm2(at_gamma);

    res.objective_history.push_back(j_cur);
    res.primal_residual_history.push_back(rp_norm);
    res.dual_residual_history.push_back(rd_norm);
    res.rho_history.push_back(st.rho);
    res.final_eps_primal = eps_p;
    res.final_eps_dual = eps_d;
    if (observer) observer(k, st.x);

    if (rp_norm <= eps_p && rd_norm <= eps_d) {
      res.converged = true;
      break;
    }
    st.rho = rho_update(st.rho, rp_norm, rd_norm, cfg);
  }

  res.x_hat = std::move(st.x);
  res.iterations = st.iter;
  return res;
}

}  // namespace sparsechan::admm
