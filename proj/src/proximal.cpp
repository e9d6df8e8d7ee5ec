#include "sparsechan/proximal.hpp"

#include <cmath>
#include <stdexcept>

namespace sparsechan {

Complex soft_threshold(Complex beta, double alpha) {
  if (!(alpha >= 0.0))
    throw std::invalid_argument("soft_threshold: alpha must be >= 0");
  const double mag = std::abs(beta);
  if (mag <= alpha) return {0.0, 0.0};
  return beta * (1.0 - alpha / mag);
}

ComplexVector soft_threshold_vec(const ComplexVector& v, double alpha) {
  ComplexVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = soft_threshold(v[i], alpha);
  return out;
}

double objective_j(const ComplexVector& x, const MeasurementModel& model,
                   double tau) {
  ComplexVector r = matvec(model.A, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = model.y[i] - r[i];
  return tau * norm1(r) + norm1(x);
}

namespace {

// z + A x - y + gamma/rho, the residual shared by f1 and g1.
ComplexVector shifted_residual(const ComplexVector& z, const ComplexVector& Ax,
                               const ComplexVector& y,
                               const ComplexVector& gamma, double rho) {
  ComplexVector r(z.size());
  for (std::size_t i = 0; i < z.size(); ++i)
    r[i] = z[i] + Ax[i] - y[i] + gamma[i] / rho;
  return r;
}

void check_mn(const MeasurementModel& model, const ComplexVector& z,
              const ComplexVector& gamma, double rho, const char* who) {
  if (static_cast<int>(z.size()) != model.num_obs() ||
      static_cast<int>(gamma.size()) != model.num_obs())
    throw std::invalid_argument(std::string(who) + ": length mismatch");
  if (!(rho > 0.0))
    throw std::invalid_argument(std::string(who) + ": rho must be > 0");
}

}  // namespace

ComplexVector grad_f1(const ComplexVector& x, const ComplexVector& z,
                      const ComplexVector& gamma, const MeasurementModel& model,
                      double rho) {
  check_mn(model, z, gamma, rho, "grad_f1");
  const ComplexVector Ax = matvec(model.A, x);
  ComplexVector r = shifted_residual(z, Ax, model.y, gamma, rho);
  ComplexVector g = adjoint_matvec(model.A, r);
  for (Complex& c : g) c *= rho;
  return g;
}

ComplexVector grad_g1(const ComplexVector& z, const ComplexVector& x_new,
                      const ComplexVector& gamma, const MeasurementModel& model,
                      double rho) {
  check_mn(model, z, gamma, rho, "grad_g1");
  const ComplexVector Ax = matvec(model.A, x_new);
  ComplexVector r = shifted_residual(z, Ax, model.y, gamma, rho);
  for (Complex& c : r) c *= rho;
  return r;
}

double objective_g(const ComplexVector& z, const ComplexVector& x_new,
                   const ComplexVector& gamma, const MeasurementModel& model,
                   double rho, double tau) {
  check_mn(model, z, gamma, rho, "objective_g");
  const ComplexVector Ax = matvec(model.A, x_new);
  const ComplexVector r = shifted_residual(z, Ax, model.y, gamma, rho);
  const double q = norm2(r);
  return 0.5 * rho * q * q + tau * norm1(z);
}

}  // namespace sparsechan
