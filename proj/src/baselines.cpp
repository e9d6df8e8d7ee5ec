#include "sparsechan/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include "sparsechan/proximal.hpp"

namespace sparsechan {

double lambda_inf(const MeasurementModel& model) {
  return 2.0 * norm_inf(adjoint_matvec(model.A, model.y));
}

namespace {

// In-place Cholesky solve of the Hermitian positive-definite system G v = b.
// Returns false when a pivot is not safely positive.
bool cholesky_solve(std::vector<Complex>& G, int k, std::vector<Complex>& v,
                    double pivot_floor) {
  auto at = [&](int i, int j) -> Complex& { return G[i * k + j]; };
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j <= i; ++j) {
      Complex s = at(i, j);
      for (int p = 0; p < j; ++p) s -= at(i, p) * std::conj(at(j, p));
      if (i == j) {
        if (s.real() <= pivot_floor) return false;
        at(i, i) = std::sqrt(s.real());
      } else {
        at(i, j) = s / at(j, j).real();
      }
    }
  }
  for (int i = 0; i < k; ++i) {  // L u = b
    Complex s = v[i];
    for (int p = 0; p < i; ++p) s -= at(i, p) * v[p];
    v[i] = s / at(i, i).real();
  }
  for (int i = k - 1; i >= 0; --i) {  // L^H x = u
    Complex s = v[i];
    for (int p = i + 1; p < k; ++p) s -= std::conj(at(p, i)) * v[p];
    v[i] = s / at(i, i).real();
  }
  return true;
}

}  // namespace

SolveResult omp_solve(const MeasurementModel& model, const OmpConfig& cfg,
                      const IterationObserver& observer) {
  validate(model);
  const int m = model.num_obs();
  const int n = model.num_unknowns();
  if (cfg.num_iterations < 1 || cfg.num_iterations > std::min(m, n))
    throw std::invalid_argument("OmpConfig: num_iterations out of range");

  const ColumnCache cols(model.A);
  auto column = [&](int j) {
    return reinterpret_cast<const Complex*>(
        cols.data.data() + 2 * static_cast<std::size_t>(j) * m);
  };

  SolveResult res;
  res.x_hat.assign(n, Complex(0.0, 0.0));
  res.converged = true;

  ComplexVector r = model.y;
  ComplexVector Ax(m, Complex(0.0, 0.0));
  std::vector<int> support;
  std::vector<char> selected(n, 0);
  std::vector<Complex> coeff;
  const double y_norm = norm2(model.y);

  for (int it = 1; it <= cfg.num_iterations; ++it) {
    if (norm2(r) <= 1e-13 * std::max(y_norm, 1.0)) break;  // early exact fit

    const ComplexVector c = adjoint_matvec(model.A, r);
    int best = -1;
    double best_mag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (selected[j]) continue;
      const double mag = std::abs(c[j]);
      if (mag > best_mag) {
        best_mag = mag;
        best = j;
      }
    }
    if (best < 0 || best_mag == 0.0) break;
    selected[best] = 1;
    support.push_back(best);

    // Least-squares refit on the selected support via normal equations.
    const int k = static_cast<int>(support.size());
    std::vector<Complex> gram(static_cast<std::size_t>(k) * k);
    coeff.assign(k, Complex(0.0, 0.0));
    for (int a = 0; a < k; ++a) {
      const Complex* ca = column(support[a]);
      for (int b = 0; b <= a; ++b) {
        const Complex* cb = column(support[b]);
        Complex s(0.0, 0.0);
        for (int i = 0; i < m; ++i) s += std::conj(ca[i]) * cb[i];
        gram[a * k + b] = s;
        gram[b * k + a] = std::conj(s);
      }
      Complex s(0.0, 0.0);
      for (int i = 0; i < m; ++i) s += std::conj(ca[i]) * model.y[i];
      coeff[a] = s;
    }

    double trace = 0.0;
    for (int a = 0; a < k; ++a) trace += gram[a * k + a].real();
    std::vector<Complex> factor = gram;
    std::vector<Complex> rhs = coeff;
    if (!cholesky_solve(factor, k, rhs, 1e-14 * std::max(trace, 1e-300))) {
      // Rank-deficient restriction: damped normal equations, which approach
      // the minimum-norm least-squares solution as the damping vanishes.
      factor = gram;
      rhs = coeff;
      const double damp = 1e-10 * std::max(trace / k, 1e-300);
      for (int a = 0; a < k; ++a) factor[a * k + a] += damp;
      if (!cholesky_solve(factor, k, rhs, 0.0)) break;
    }

    std::fill(res.x_hat.begin(), res.x_hat.end(), Complex(0.0, 0.0));
    for (int a = 0; a < k; ++a) res.x_hat[support[a]] = rhs[a];
    cols.accumulate(res.x_hat, support, Ax);
    for (int i = 0; i < m; ++i) r[i] = model.y[i] - Ax[i];

    res.iterations = it;
    res.objective_history.push_back(norm2(r));
    if (observer) observer(it, res.x_hat);
  }
  return res;
}

SolveResult fista_solve(const MeasurementModel& model, const FistaConfig& cfg,
                        const IterationObserver& observer) {
  validate(model);
  if (!(cfg.lambda > 0.0))
    throw std::invalid_argument("FistaConfig: lambda must be > 0");
  if (!(cfg.t0 > 0.0)) throw std::invalid_argument("FistaConfig: t0 must be > 0");
  if (!(cfg.eta > 1.0)) throw std::invalid_argument("FistaConfig: eta must be > 1");
  if (cfg.max_iter < 1 || !(cfg.rel_tol > 0.0))
    throw std::invalid_argument("FistaConfig: bad stopping parameters");

  const int m = model.num_obs();
  const int n = model.num_unknowns();
  const ComplexVector& y = model.y;
  const ColumnCache cols(model.A);

  auto half_sq = [&](const ComplexVector& Av) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += std::norm(Av[i] - y[i]);
    return 0.5 * s;
  };

  // Best (monotone) iterate, its predecessor, and the extrapolated point,
  // together with their tracked products so the momentum step costs no
  // additional matrix product.
  ComplexVector x(n, Complex(0.0, 0.0)), x_prev = x, u = x;
  ComplexVector Ax(m, Complex(0.0, 0.0)), Ax_prev = Ax, Au = Ax;
  ComplexVector cand(n), cand_prev(n, Complex(0.0, 0.0)), cand_ax;
  std::vector<int> support;
  support.reserve(n);

  double f_best = half_sq(Ax);  // f(0)
  double obj_best = f_best;     // lambda*||0||_1 = 0
  double theta = 1.0;
  double t = cfg.t0;

  SolveResult res;
  for (int k = 1; k <= cfg.max_iter; ++k) {
    ComplexVector grad_arg(m);
    for (int i = 0; i < m; ++i) grad_arg[i] = Au[i] - y[i];
    const ComplexVector g = adjoint_matvec(model.A, grad_arg);
    const double f_u = half_sq(Au);

    // Shrink t until the quadratic upper bound holds at the prox point. The
    // bound must hold once t <= 1/L; the trial cap only guards rounding.
    double f_cand = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      support.clear();
      for (int j = 0; j < n; ++j) {
        cand[j] = soft_threshold(u[j] - t * g[j], cfg.lambda * t);
        if (cand[j] != Complex(0.0, 0.0)) support.push_back(j);
      }
      cols.accumulate(cand, support, cand_ax);
      f_cand = half_sq(cand_ax);
      double lin = 0.0, sq = 0.0;
      for (int j = 0; j < n; ++j) {
        const Complex d = cand[j] - u[j];
        lin += (std::conj(g[j]) * d).real();
        sq += std::norm(d);
      }
      if (f_cand <= f_u + lin + sq / (2.0 * t)) break;
      t /= cfg.eta;
    }

    double cand_l1 = 0.0;
    for (int j : support) cand_l1 += std::abs(cand[j]);
    const double obj_cand = f_cand + cfg.lambda * cand_l1;

    // Monotone safeguard: keep the previous iterate when the prox point is
    // worse, so the objective history never increases.
    x_prev.swap(x);
    Ax_prev.swap(Ax);
    if (obj_cand <= obj_best) {
      x = cand;
      Ax = cand_ax;
      obj_best = obj_cand;
    } else {
      x = x_prev;
      Ax = Ax_prev;
    }

    const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
    const double c1 = theta / theta_next;
    const double c2 = (theta - 1.0) / theta_next;
    for (int j = 0; j < n; ++j)
      u[j] = x[j] + c1 * (cand[j] - x[j]) + c2 * (x[j] - x_prev[j]);
    for (int i = 0; i < m; ++i)
      Au[i] = Ax[i] + c1 * (cand_ax[i] - Ax[i]) + c2 * (Ax[i] - Ax_prev[i]);
    theta = theta_next;

    res.objective_history.push_back(obj_best);
    res.iterations = k;
    if (observer) observer(k, x);

    // Relative change of the prox sequence.
    double diff = 0.0;
    for (int j = 0; j < n; ++j) diff += std::norm(cand[j] - cand_prev[j]);
    const double denom = std::max(norm2(cand_prev), 1e-30);
    cand_prev = cand;
    if (std::sqrt(diff) / denom < cfg.rel_tol) {
      res.converged = true;
      break;
    }
  }

  res.x_hat = std::move(x);
  return res;
}

}  // namespace sparsechan
