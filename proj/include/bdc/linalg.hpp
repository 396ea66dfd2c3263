#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "bdc/kernels.hpp"

namespace bdc {

using Vec = std::vector<double>;

// Dense column-major matrix. Column-major fits this workload: A*x, A^T*z and
// Gram assembly over active columns all touch whole columns contiguously.
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double* col(std::size_t j) { return data.data() + j * rows; }
  const double* col(std::size_t j) const { return data.data() + j * rows; }
  double& operator()(std::size_t i, std::size_t j) { return data[j * rows + i]; }
  double operator()(std::size_t i, std::size_t j) const { return data[j * rows + i]; }
  void set_zero() { std::fill(data.begin(), data.end(), 0.0); }
};

inline void require_dim(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("dimension mismatch: " + what);
}

double norm2(const Vec& x);
double norm2sq(const Vec& x);
double norm1(const Vec& x);
double norm_inf(const Vec& x);
double dot(const Vec& x, const Vec& y);
bool all_finite(const Vec& x);

// y = A*x
void gemv_n(const Mat& A, const Vec& x, Vec& y);
// y = A^T * x
void gemv_t(const Mat& A, const Vec& x, Vec& y);
Vec matvec(const Mat& A, const Vec& x);
Vec matvec_t(const Mat& A, const Vec& x);

// Cholesky factorization H = R^T R with R upper triangular, stored column-major
// so that both the factorization and the triangular solves run on contiguous
// column prefixes.
class DenseCholesky {
 public:
  // Returns false when H is not numerically positive definite.
  bool factor(const Mat& H);
  // Solves H x = b using the stored factor.
  void solve(const Vec& b, Vec& x) const;
  std::size_t dim() const { return n_; }

 private:
  std::size_t n_ = 0;
  Mat r_;
};

struct CgResult {
  int iters = 0;
  double rel_residual = 0.0;
  bool converged = false;
};

// Jacobi-preconditioned conjugate gradient on a dense symmetric matrix.
// Terminates when ||H x - b|| <= tol_rel * ||b|| or after max_iters steps;
// x holds the best iterate either way.
CgResult pcg_jacobi(const Mat& H, const Vec& b, Vec& x, double tol_rel, int max_iters);

}  // namespace bdc
