#include "bdc/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace bdc {

namespace k = kernels;

double norm2(const Vec& x) { return std::sqrt(k::nrm2sq(x.data(), x.size())); }
double norm2sq(const Vec& x) { return k::nrm2sq(x.data(), x.size()); }
double norm1(const Vec& x) { return k::asum(x.data(), x.size()); }

double norm_inf(const Vec& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

double dot(const Vec& x, const Vec& y) {
  require_dim(x.size() == y.size(), "dot");
  return k::dot(x.data(), y.data(), x.size());
}

bool all_finite(const Vec& x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

void gemv_n(const Mat& A, const Vec& x, Vec& y) {
  require_dim(x.size() == A.cols, "gemv_n x");
  y.assign(A.rows, 0.0);
  for (std::size_t j = 0; j < A.cols; ++j) {
    if (x[j] == 0.0) continue;
    k::axpy(x[j], A.col(j), y.data(), A.rows);
  }
}

void gemv_t(const Mat& A, const Vec& x, Vec& y) {
  require_dim(x.size() == A.rows, "gemv_t x");
  y.resize(A.cols);
  for (std::size_t j = 0; j < A.cols; ++j) y[j] = k::dot(A.col(j), x.data(), A.rows);
}

Vec matvec(const Mat& A, const Vec& x) {
  Vec y;
  gemv_n(A, x, y);
  return y;
}

Vec matvec_t(const Mat& A, const Vec& x) {
  Vec y;
  gemv_t(A, x, y);
  return y;
}

bool DenseCholesky::factor(const Mat& H) {
  require_dim(H.rows == H.cols, "cholesky");
  n_ = H.rows;
  r_ = Mat(n_, n_);
  for (std::size_t j = 0; j < n_; ++j) {
    double* rj = r_.col(j);
    const double* hj = H.col(j);
    for (std::size_t i = 0; i < j; ++i) {
      const double* ri = r_.col(i);
      rj[i] = (hj[i] - k::dot(ri, rj, i)) / ri[i];
    }
    const double d = hj[j] - k::nrm2sq(rj, j);
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    rj[j] = std::sqrt(d);
  }
  return true;
}

void DenseCholesky::solve(const Vec& b, Vec& x) const {
  require_dim(b.size() == n_, "cholesky solve");
  Vec u(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    const double* rj = r_.col(j);
    u[j] = (b[j] - k::dot(rj, u.data(), j)) / rj[j];
  }
  x = u;
  for (std::size_t p = n_; p-- > 0;) {
    const double* rp = r_.col(p);
    x[p] /= rp[p];
    if (p > 0) k::axpy(-x[p], rp, x.data(), p);
  }
}

CgResult pcg_jacobi(const Mat& H, const Vec& b, Vec& x, double tol_rel, int max_iters) {
  const std::size_t m = H.rows;
  require_dim(H.cols == m && b.size() == m, "pcg");
  x.assign(m, 0.0);
  Vec r = b;
  const double bnorm = norm2(b);
  CgResult res;
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }
  Vec dinv(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double d = H(i, i);
    dinv[i] = d > 0.0 ? 1.0 / d : 1.0;
  }
  Vec z(m), p(m), hp(m);
  for (std::size_t i = 0; i < m; ++i) z[i] = dinv[i] * r[i];
  p = z;
  double rz = dot(r, z);
  for (int it = 0; it < max_iters; ++it) {
    // symmetric H: row i equals column i, so H*p is a dot per column
    for (std::size_t i = 0; i < m; ++i) hp[i] = k::dot(H.col(i), p.data(), m);
    const double php = dot(p, hp);
    if (php <= 0.0) break;
    const double alpha = rz / php;
    k::axpy(alpha, p.data(), x.data(), m);
    k::axpy(-alpha, hp.data(), r.data(), m);
    res.iters = it + 1;
    res.rel_residual = norm2(r) / bnorm;
    if (res.rel_residual <= tol_rel) {
      res.converged = true;
      return res;
    }
    for (std::size_t i = 0; i < m; ++i) z[i] = dinv[i] * r[i];
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    k::lincomb(1.0, z.data(), beta, p.data(), p.data(), m);
  }
  res.rel_residual = norm2(r) / bnorm;
  res.converged = res.rel_residual <= tol_rel;
  return res;
}

}  // namespace bdc
