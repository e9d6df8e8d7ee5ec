#pragma once

#include "sparsechan/linalg.hpp"

namespace sparsechan {

// Complex soft-thresholding S_alpha(beta): shrinks the magnitude by alpha and
// preserves the phase; zero when |beta| <= alpha. Evaluated in the
// magnitude-shrinkage closed form, which avoids the 0/0 of the ratio
// expression at beta = 0. The l1 norm on complex vectors means the sum of
// complex moduli throughout, which is what makes this operator the prox of
// the l1 term.
Complex soft_threshold(Complex beta, double alpha);

// Elementwise soft-thresholding (the l1 norm is separable).
ComplexVector soft_threshold_vec(const ComplexVector& v, double alpha);

// J(x) = tau * ||y - A x||_1 + ||x||_1, the robust l1-l1 cost.
double objective_j(const ComplexVector& x, const MeasurementModel& model,
                   double tau);

// Gradient of the smooth x-subproblem term:
//   f1(x) = (rho/2) ||z + A x - y + gamma/rho||_2^2
//   grad f1(x) = rho A^H (z + A x - y + gamma/rho)
ComplexVector grad_f1(const ComplexVector& x, const ComplexVector& z,
                      const ComplexVector& gamma, const MeasurementModel& model,
                      double rho);

// Gradient of the smooth z-subproblem term:
//   g1(z) = (rho/2) ||z + A x_new - y + gamma/rho||_2^2
//   grad g1(z) = rho (z + A x_new - y + gamma/rho)
ComplexVector grad_g1(const ComplexVector& z, const ComplexVector& x_new,
                      const ComplexVector& gamma, const MeasurementModel& model,
                      double rho);

// G(z) = g1(z) + tau ||z||_1, the z-subproblem objective.
double objective_g(const ComplexVector& z, const ComplexVector& x_new,
                   const ComplexVector& gamma, const MeasurementModel& model,
                   double rho, double tau);

}  // namespace sparsechan
