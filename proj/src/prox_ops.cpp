#include "bdc/prox_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace bdc {

namespace {

void require_finite(const Vec& x, const char* who) {
  if (!all_finite(x)) throw std::invalid_argument(std::string(who) + ": non-finite input");
}

void require_param(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

std::size_t DiagMask::count_active() const {
  std::size_t c = 0;
  for (auto v : d) c += v;
  return c;
}

std::vector<std::size_t> DiagMask::active_indices() const {
  std::vector<std::size_t> idx;
  idx.reserve(count_active());
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i]) idx.push_back(i);
  return idx;
}

void BallJacobian::apply(const Vec& v, Vec& out) const {
  require_dim(v.size() == u.size() || jac_case == Case::Identity, "ball_jacobian apply");
  out.resize(v.size());
  kernels::scal(c, v.data(), out.data(), v.size());
  if (beta != 0.0) {
    const double s = beta * kernels::dot(u.data(), v.data(), v.size());
    kernels::axpy(s, u.data(), out.data(), v.size());
  }
}

Mat BallJacobian::materialize() const {
  const std::size_t m = u.size();
  Mat B(m, m);
  for (std::size_t i = 0; i < m; ++i) B(i, i) = c;
  if (beta != 0.0) kernels::rank1_update(B.data.data(), m, u.data(), beta, m);
  return B;
}

Vec soft_threshold(const Vec& y, double nu) {
  require_finite(y, "soft_threshold");
  require_param(std::isfinite(nu) && nu >= 0.0, "soft_threshold: nu must be >= 0");
  Vec out(y.size());
  kernels::soft_threshold(y.data(), nu, out.data(), y.size());
  return out;
}

Vec prox_box_l1(const Vec& y, double nu, double bound) {
  require_finite(y, "prox_box_l1");
  require_param(std::isfinite(nu) && nu >= 0.0, "prox_box_l1: nu must be >= 0");
  require_param(std::isfinite(bound) && bound > 0.0, "prox_box_l1: bound must be > 0");
  Vec out(y.size());
  kernels::soft_threshold_clamp(y.data(), nu, bound, out.data(), y.size());
  return out;
}

Vec project_l2_ball(const Vec& u, double kappa) {
  require_finite(u, "project_l2_ball");
  require_param(std::isfinite(kappa) && kappa > 0.0, "project_l2_ball: kappa must be > 0");
  const double nrm = norm2(u);
  if (nrm <= kappa) return u;
  Vec out(u.size());
  kernels::scal(kappa / nrm, u.data(), out.data(), u.size());
  return out;
}

DiagMask clarke_mask_l1(const Vec& v, double nu) {
  require_finite(v, "clarke_mask_l1");
  require_param(std::isfinite(nu) && nu > 0.0, "clarke_mask_l1: nu must be > 0");
  DiagMask mask;
  mask.d.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) mask.d[i] = std::abs(v[i]) > nu ? 1 : 0;
  return mask;
}

DiagMask clarke_mask_box_l1(const Vec& v, double nu, double bound) {
  require_finite(v, "clarke_mask_box_l1");
  require_param(std::isfinite(nu) && nu > 0.0, "clarke_mask_box_l1: nu must be > 0");
  require_param(std::isfinite(bound) && bound > 0.0, "clarke_mask_box_l1: bound must be > 0");
  DiagMask mask;
  mask.d.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    mask.d[i] = (a > nu && a - nu < bound) ? 1 : 0;
  }
  return mask;
}

BallJacobian ball_jacobian(const Vec& u, double kappa) {
  require_finite(u, "ball_jacobian");
  require_param(std::isfinite(kappa) && kappa > 0.0, "ball_jacobian: kappa must be > 0");
  BallJacobian B;
  B.u = u;
  B.kappa = kappa;
  const double nrm = norm2(u);
  if (nrm < kappa) {
    B.jac_case = BallJacobian::Case::Identity;
    B.c = 1.0;
    B.beta = 0.0;
  } else if (nrm > kappa) {
    B.jac_case = BallJacobian::Case::Exterior;
    B.c = kappa / nrm;
    B.beta = -kappa / (nrm * nrm * nrm);
  } else {
    // t = 1 coincides with the limit from the exterior
    B.jac_case = BallJacobian::Case::Boundary;
    B.c = 1.0;
    B.beta = -1.0 / (kappa * kappa);
  }
  return B;
}

}  // namespace bdc
