#pragma once

#include <cstddef>

// Low-level data-parallel kernels used by all numeric code in this project.
//
// Every kernel exists in a scalar reference form and (on x86-64 with AVX2+FMA)
// a vectorized form. The dispatched entry points below pick the widest variant
// supported by the running CPU once at startup; the environment variable
// BDC_KERNELS=scalar|avx2 forces a specific implementation. Scalar and SIMD
// variants are equivalence-tested against each other (FMA changes rounding,
// so agreement is to relative tolerance, not bitwise).

namespace bdc::kernels {

struct Impl {
  double (*dot)(const double*, const double*, std::size_t);
  double (*nrm2sq)(const double*, std::size_t);
  double (*asum)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scal)(double, const double*, double*, std::size_t);
  void (*lincomb)(double, const double*, double, const double*, double*, std::size_t);
  void (*soft_threshold)(const double*, double, double*, std::size_t);
  void (*soft_threshold_clamp)(const double*, double, double, double*, std::size_t);
  void (*rank1_update)(double*, std::size_t, const double*, double, std::size_t);
  const char* name;
};

namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
double nrm2sq(const double* x, std::size_t n);
double asum(const double* x, std::size_t n);
// y += a*x
void axpy(double a, const double* x, double* y, std::size_t n);
// out = a*x
void scal(double a, const double* x, double* out, std::size_t n);
// out = a*x + b*y
void lincomb(double a, const double* x, double b, const double* y, double* out, std::size_t n);
// out_i = sign(v_i) * max(|v_i| - nu, 0)
void soft_threshold(const double* v, double nu, double* out, std::size_t n);
// out_i = clamp(soft_threshold(v_i, nu), -bound, bound)
void soft_threshold_clamp(const double* v, double nu, double bound, double* out, std::size_t n);
// G += alpha * u * u^T, G dense m-by-m with leading dimension ld (full matrix)
void rank1_update(double* G, std::size_t ld, const double* u, double alpha, std::size_t m);
const Impl& impl();
}  // namespace scalar

#if defined(BDC_HAVE_AVX2)
namespace avx2 {
double dot(const double* x, const double* y, std::size_t n);
double nrm2sq(const double* x, std::size_t n);
double asum(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void scal(double a, const double* x, double* out, std::size_t n);
void lincomb(double a, const double* x, double b, const double* y, double* out, std::size_t n);
void soft_threshold(const double* v, double nu, double* out, std::size_t n);
void soft_threshold_clamp(const double* v, double nu, double bound, double* out, std::size_t n);
void rank1_update(double* G, std::size_t ld, const double* u, double alpha, std::size_t m);
const Impl& impl();
}  // namespace avx2
#endif

// True when an AVX2+FMA variant is compiled in and supported by this CPU.
bool simd_available();

// The implementation selected by the dispatcher ("scalar" or "avx2").
const char* active_impl_name();

const Impl& active();

inline double dot(const double* x, const double* y, std::size_t n) { return active().dot(x, y, n); }
inline double nrm2sq(const double* x, std::size_t n) { return active().nrm2sq(x, n); }
inline double asum(const double* x, std::size_t n) { return active().asum(x, n); }
inline void axpy(double a, const double* x, double* y, std::size_t n) { active().axpy(a, x, y, n); }
inline void scal(double a, const double* x, double* out, std::size_t n) { active().scal(a, x, out, n); }
inline void lincomb(double a, const double* x, double b, const double* y, double* out,
                    std::size_t n) {
  active().lincomb(a, x, b, y, out, n);
}
inline void soft_threshold(const double* v, double nu, double* out, std::size_t n) {
  active().soft_threshold(v, nu, out, n);
}
inline void soft_threshold_clamp(const double* v, double nu, double bound, double* out,
                                 std::size_t n) {
  active().soft_threshold_clamp(v, nu, bound, out, n);
}
inline void rank1_update(double* G, std::size_t ld, const double* u, double alpha, std::size_t m) {
  active().rank1_update(G, ld, u, alpha, m);
}

}  // namespace bdc::kernels
