#include "bdc/bregman.hpp"

#include <stdexcept>

namespace bdc {

double KernelModel::phi(const Vec& x) const {
  require_dim(x.size() == n_, "kernel phi");
  double v = 0.5 * norm2sq(x);
  if (kind_ == Kind::QuadraticPlusGram) {
    Vec ax;
    gemv_n(*a_, x, ax);
    v += 0.5 * norm2sq(ax);
  }
  return v;
}

Vec KernelModel::phi_grad(const Vec& x) const {
  require_dim(x.size() == n_, "kernel phi_grad");
  if (!all_finite(x)) throw std::invalid_argument("phi_grad: non-finite input");
  Vec g = x;
  if (kind_ == Kind::QuadraticPlusGram) {
    Vec ax, atax;
    gemv_n(*a_, x, ax);
    gemv_t(*a_, ax, atax);
    kernels::axpy(1.0, atax.data(), g.data(), g.size());
  }
  return g;
}

double KernelModel::bregman_distance(const Vec& x, const Vec& y) const {
  require_dim(x.size() == n_ && y.size() == n_, "bregman_distance");
  Vec diff(n_);
  kernels::lincomb(1.0, x.data(), -1.0, y.data(), diff.data(), n_);
  double d = 0.5 * norm2sq(diff);
  if (kind_ == Kind::QuadraticPlusGram) {
    Vec adiff;
    gemv_n(*a_, diff, adiff);
    d += 0.5 * norm2sq(adiff);
  }
  return d;
}

}  // namespace bdc
