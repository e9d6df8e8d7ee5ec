#include "sparsechan/linalg.hpp"

#include <cmath>
#include <stdexcept>

#include "sparsechan/rng.hpp"

namespace sparsechan {

ComplexMatrix ComplexMatrix::identity(int n) {
  ComplexMatrix out(n, n);
  for (int i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

void validate(const MeasurementModel& model) {
  if (model.A.rows <= 0 || model.A.cols <= 0)
    throw std::invalid_argument("MeasurementModel: empty operator");
  if (model.A.data.size() !=
      static_cast<std::size_t>(model.A.rows) * model.A.cols)
    throw std::invalid_argument("MeasurementModel: operator storage size");
  if (static_cast<int>(model.y.size()) != model.A.rows)
    throw std::invalid_argument("MeasurementModel: y length != rows");
  for (const Complex& c : model.A.data)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw std::invalid_argument("MeasurementModel: non-finite entry in A");
  for (const Complex& c : model.y)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw std::invalid_argument("MeasurementModel: non-finite entry in y");
}

// The two kernels below run on interleaved re/im doubles; std::complex
// multiplication compiles to branchy code that blocks vectorization.
ComplexVector matvec(const ComplexMatrix& A, const ComplexVector& v) {
  if (A.cols != static_cast<int>(v.size()))
    throw std::invalid_argument("matvec: A.cols != v.len");
  ComplexVector out(A.rows);
  const double* a = reinterpret_cast<const double*>(A.data.data());
  const double* x = reinterpret_cast<const double*>(v.data());
  for (int i = 0; i < A.rows; ++i) {
    const double* row = a + 2 * static_cast<std::size_t>(i) * A.cols;
    double re = 0.0, im = 0.0;
    for (int j = 0; j < A.cols; ++j) {
      const double ar = row[2 * j], ai = row[2 * j + 1];
      const double xr = x[2 * j], xi = x[2 * j + 1];
      re += ar * xr - ai * xi;
      im += ar * xi + ai * xr;
    }
    out[i] = {re, im};
  }
  return out;
}

ComplexVector adjoint_matvec(const ComplexMatrix& A, const ComplexVector& v) {
  if (A.rows != static_cast<int>(v.size()))
    throw std::invalid_argument("adjoint_matvec: A.rows != v.len");
  ComplexVector out(A.cols, Complex(0.0, 0.0));
  const double* a = reinterpret_cast<const double*>(A.data.data());
  double* o = reinterpret_cast<double*>(out.data());
  for (int i = 0; i < A.rows; ++i) {
    const double* row = a + 2 * static_cast<std::size_t>(i) * A.cols;
    const double vr = v[i].real(), vi = v[i].imag();
    for (int j = 0; j < A.cols; ++j) {
      const double ar = row[2 * j], ai = row[2 * j + 1];
      // conj(a) * v
      o[2 * j] += ar * vr + ai * vi;
      o[2 * j + 1] += ar * vi - ai * vr;
    }
  }
  return out;
}

ComplexMatrix build_convolution_matrix(const ComplexVector& probe,
                                       int channel_len, int num_obs) {
  if (probe.empty())
    throw std::invalid_argument("build_convolution_matrix: empty probe");
  if (channel_len < 1 || num_obs < 1)
    throw std::invalid_argument("build_convolution_matrix: bad dimensions");
  const int plen = static_cast<int>(probe.size());
  ComplexMatrix A(num_obs, channel_len);
  for (int i = 0; i < num_obs; ++i) {
    const int jlo = std::max(0, i - plen + 1);
    const int jhi = std::min(channel_len - 1, i);
    for (int j = jlo; j <= jhi; ++j) A(i, j) = probe[i - j];
  }
  return A;
}

EigenvalueEstimate max_eigenvalue_gram(const ComplexMatrix& A, double tol,
                                       int max_iter) {
  if (A.rows <= 0 || A.cols <= 0)
    throw std::invalid_argument("max_eigenvalue_gram: empty matrix");
  const int n = A.cols;
  ComplexVector v(n, Complex(1.0, 0.0));
  double vnorm = norm2(v);
  for (Complex& c : v) c /= vnorm;

  EigenvalueEstimate est;
  double prev = -1.0;
  bool restarted = false;
  for (int it = 1; it <= max_iter; ++it) {
    ComplexVector u = adjoint_matvec(A, matvec(A, v));  // Gram * v
    const double lambda = dot(v, u).real();
    const double unorm = norm2(u);
    est.value = std::max(lambda, 0.0);
    est.iterations = it;
    if (unorm == 0.0) {
      if (restarted) return est;  // A annihilates both start vectors
      // all-ones start happened to lie in the null space of A
      Rng rng(0x5eedULL, 0);
      for (Complex& c : v) c = rng.complex_gaussian(1.0);
      vnorm = norm2(v);
      for (Complex& c : v) c /= vnorm;
      restarted = true;
      prev = -1.0;
      continue;
    }
    for (int k = 0; k < n; ++k) v[k] = u[k] / unorm;
    if (prev >= 0.0 &&
        std::abs(lambda - prev) <= tol * std::max(std::abs(lambda), 1e-300)) {
      est.converged = true;
      return est;
    }
    prev = lambda;
  }
  return est;
}

double norm1(const ComplexVector& v) {
  double s = 0.0;
  for (const Complex& c : v) s += std::abs(c);
  return s;
}

double norm2(const ComplexVector& v) {
  double s = 0.0;
  for (const Complex& c : v) s += std::norm(c);
  return std::sqrt(s);
}

double norm_inf(const ComplexVector& v) {
  double m = 0.0;
  for (const Complex& c : v) m = std::max(m, std::abs(c));
  return m;
}

double frobenius_norm(const ComplexMatrix& A) {
  double s = 0.0;
  for (const Complex& c : A.data) s += std::norm(c);
  return std::sqrt(s);
}

Complex dot(const ComplexVector& u, const ComplexVector& v) {
  if (u.size() != v.size()) throw std::invalid_argument("dot: length mismatch");
  Complex s(0.0, 0.0);
  for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
  return s;
}

ColumnCache::ColumnCache(const ComplexMatrix& A)
    : rows(A.rows), cols(A.cols), data(2 * A.data.size()) {
  for (int j = 0; j < cols; ++j) {
    double* col = data.data() + 2 * static_cast<std::size_t>(j) * rows;
    for (int i = 0; i < rows; ++i) {
      const Complex& c = A(i, j);
      col[2 * i] = c.real();
      col[2 * i + 1] = c.imag();
    }
  }
}

void ColumnCache::accumulate(const ComplexVector& x,
                             const std::vector<int>& support,
                             ComplexVector& out) const {
  out.assign(rows, Complex(0.0, 0.0));
  double* o = reinterpret_cast<double*>(out.data());
  for (int j : support) {
    const double* col = data.data() + 2 * static_cast<std::size_t>(j) * rows;
    const double xr = x[j].real(), xi = x[j].imag();
    if (xr == 0.0 && xi == 0.0) continue;
    for (int i = 0; i < rows; ++i) {
      const double ar = col[2 * i], ai = col[2 * i + 1];
      o[2 * i] += ar * xr - ai * xi;
      o[2 * i + 1] += ar * xi + ai * xr;
    }
  }
}

}  // namespace sparsechan
