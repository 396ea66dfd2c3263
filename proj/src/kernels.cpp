#include "bdc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>

namespace bdc::kernels {

namespace scalar {

double dot(const double* x, const double* y, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += x[i] * y[i];
    s1 += x[i + 1] * y[i + 1];
    s2 += x[i + 2] * y[i + 2];
    s3 += x[i + 3] * y[i + 3];
  }
  double s = (s0 + s1) + (s2 + s3);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double nrm2sq(const double* x, std::size_t n) { return dot(x, x, n); }

double asum(const double* x, std::size_t n) {
  double s0 = 0.0, s1 = 0.0;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    s0 += std::abs(x[i]);
    s1 += std::abs(x[i + 1]);
  }
  double s = s0 + s1;
  for (; i < n; ++i) s += std::abs(x[i]);
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal(double a, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i];
}

void lincomb(double a, const double* x, double b, const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void soft_threshold(const double* v, double nu, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::abs(v[i]) - nu;
    out[i] = a > 0.0 ? std::copysign(a, v[i]) : 0.0;
  }
}

void soft_threshold_clamp(const double* v, double nu, double bound, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double a = std::abs(v[i]) - nu;
    a = a > 0.0 ? a : 0.0;
    a = a < bound ? a : bound;
    out[i] = std::copysign(a, v[i]);
  }
}

void rank1_update(double* G, std::size_t ld, const double* u, double alpha, std::size_t m) {
  for (std::size_t j = 0; j < m; ++j) {
    const double c = alpha * u[j];
    if (c == 0.0) continue;
    axpy(c, u, G + j * ld, m);
  }
}

const Impl& impl() {
  static const Impl k{dot,  nrm2sq,        asum,
                      axpy, scal,          lincomb,
                      soft_threshold, soft_threshold_clamp, rank1_update,
                      "scalar"};
  return k;
}

}  // namespace scalar

bool simd_available() {
#if defined(BDC_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

const Impl& select_impl() {
  const char* force = std::getenv("BDC_KERNELS");
  if (force != nullptr && std::strcmp(force, "scalar") == 0) return scalar::impl();
#if defined(BDC_HAVE_AVX2)
  if (force != nullptr && std::strcmp(force, "avx2") == 0) return avx2::impl();
  if (simd_available()) return avx2::impl();
#endif
  return scalar::impl();
}

}  // namespace

const Impl& active() {
  static const Impl& chosen = select_impl();
  return chosen;
}

const char* active_impl_name() { return active().name; }

}  // namespace bdc::kernels
