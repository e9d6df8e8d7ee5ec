#pragma once

#include <complex>
#include <vector>

namespace sparsechan {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

// Dense row-major complex matrix. Sizes here (N up to a few thousand) do not
// warrant sparse or FFT-based operators.
struct ComplexMatrix {
  int rows = 0;
  int cols = 0;
  ComplexVector data;  // row-major, rows*cols entries

  ComplexMatrix() = default;
  ComplexMatrix(int r, int c)
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * c) {}

  Complex& operator()(int i, int j) {
    return data[static_cast<std::size_t>(i) * cols + j];
  }
  const Complex& operator()(int i, int j) const {
    return data[static_cast<std::size_t>(i) * cols + j];
  }

  static ComplexMatrix identity(int n);
};

// One estimation instance: observations y = A x + n.
struct MeasurementModel {
  ComplexMatrix A;
  ComplexVector y;

  int num_obs() const { return A.rows; }
  int num_unknowns() const { return A.cols; }
};

// Throws std::invalid_argument if dimensions disagree or entries are not finite.
void validate(const MeasurementModel& model);

// y = A v. Dimension mismatch throws std::invalid_argument.
ComplexVector matvec(const ComplexMatrix& A, const ComplexVector& v);

// y = A^H v (conjugate transpose product).
ComplexVector adjoint_matvec(const ComplexMatrix& A, const ComplexVector& v);

// M x N Toeplitz matrix with A[i,j] = probe[i-j] (zero outside the probe), so
// that A*x is the linear convolution of probe and x truncated to M samples.
ComplexMatrix build_convolution_matrix(const ComplexVector& probe,
                                       int channel_len, int num_obs);

struct EigenvalueEstimate {
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Largest eigenvalue of A^H A by power iteration on v -> A^H(A v), converged
// when the relative Rayleigh-quotient change drops below tol. Starts from the
// deterministic all-ones vector (seeded random restart if that direction is
// annihilated) so results are reproducible. Non-convergence returns the best
// estimate with converged = false.
EigenvalueEstimate max_eigenvalue_gram(const ComplexMatrix& A,
                                       double tol = 1e-10, int max_iter = 1000);

double norm1(const ComplexVector& v);   // sum of complex moduli
double norm2(const ComplexVector& v);
double norm_inf(const ComplexVector& v);
double frobenius_norm(const ComplexMatrix& A);

// <u, v> = sum conj(u_i) v_i
Complex dot(const ComplexVector& u, const ComplexVector& v);

// Column-contiguous mirror of a matrix, for accumulating products of sparse
// vectors against columns without striding across rows.
struct ColumnCache {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;  // per column: interleaved re/im, column-major

  explicit ColumnCache(const ComplexMatrix& A);

  // out = A x restricted to the given support; entries of x outside the
  // support are treated as zero.
  void accumulate(const ComplexVector& x, const std::vector<int>& support,
                  ComplexVector& out) const;
};

}  // namespace sparsechan
