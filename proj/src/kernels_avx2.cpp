// AVX2+FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma; it must only be entered through the runtime dispatcher.

#if defined(BDC_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "bdc/kernels.hpp"

namespace bdc::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

const __m256d kAbsMask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
const __m256d kSignMask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x8000000000000000ULL));

}  // namespace

double dot(const double* x, const double* y, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  __m256d s2 = _mm256_setzero_pd(), s3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), s1);
    s2 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 8), _mm256_loadu_pd(y + i + 8), s2);
    s3 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 12), _mm256_loadu_pd(y + i + 12), s3);
  }
  for (; i + 4 <= n; i += 4)
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), s0);
  double s = hsum(_mm256_add_pd(_mm256_add_pd(s0, s1), _mm256_add_pd(s2, s3)));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double nrm2sq(const double* x, std::size_t n) { return dot(x, x, n); }

double asum(const double* x, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 = _mm256_add_pd(s0, _mm256_and_pd(_mm256_loadu_pd(x + i), kAbsMask));
    s1 = _mm256_add_pd(s1, _mm256_and_pd(_mm256_loadu_pd(x + i + 4), kAbsMask));
  }
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) s += std::abs(x[i]);
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    _mm256_storeu_pd(y + i + 4,
                     _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
  }
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

void scal(double a, const double* x, double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = a * x[i];
}

void lincomb(double a, const double* x, double b, const double* y, double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d t = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), t));
  }
  for (; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void soft_threshold(const double* v, double nu, double* out, std::size_t n) {
  const __m256d vnu = _mm256_set1_pd(nu);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d w = _mm256_loadu_pd(v + i);
    __m256d mag = _mm256_max_pd(_mm256_sub_pd(_mm256_and_pd(w, kAbsMask), vnu), zero);
    _mm256_storeu_pd(out + i, _mm256_or_pd(mag, _mm256_and_pd(w, kSignMask)));
  }
  for (; i < n; ++i) {
    const double a = std::abs(v[i]) - nu;
    out[i] = a > 0.0 ? std::copysign(a, v[i]) : 0.0;
  }
}

void soft_threshold_clamp(const double* v, double nu, double bound, double* out, std::size_t n) {
  const __m256d vnu = _mm256_set1_pd(nu);
  const __m256d vbound = _mm256_set1_pd(bound);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d w = _mm256_loadu_pd(v + i);
    __m256d mag = _mm256_max_pd(_mm256_sub_pd(_mm256_and_pd(w, kAbsMask), vnu), zero);
    mag = _mm256_min_pd(mag, vbound);
    _mm256_storeu_pd(out + i, _mm256_or_pd(mag, _mm256_and_pd(w, kSignMask)));
  }
  for (; i < n; ++i) {
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
                      "avx2"};
  return k;
}

}  // namespace bdc::kernels::avx2

#endif  // BDC_HAVE_AVX2
