#pragma once

#include <cstdint>
#include <vector>

#include "bdc/linalg.hpp"

// Closed-form proximal mappings, projections and elements of their Clarke
// generalized Jacobians. All maps are total over finite inputs; NaN/Inf inputs
// are rejected here at the module boundary.

namespace bdc {

// 0/1 diagonal Clarke Jacobian element of a separable prox map.
struct DiagMask {
  std::vector<std::uint8_t> d;

  std::size_t size() const { return d.size(); }
  std::size_t count_active() const;
  std::vector<std::size_t> active_indices() const;
};

// Element of the Clarke Jacobian of the Euclidean-ball projection. All three
// cases have the form c*I + beta*u*u^T, which keeps applications matrix-free.
struct BallJacobian {
  enum class Case { Identity, Boundary, Exterior };

  Case jac_case = Case::Identity;
  Vec u;
  double kappa = 1.0;
  double c = 1.0;
  double beta = 0.0;

  void apply(const Vec& v, Vec& out) const;
  Mat materialize() const;
};

Vec soft_threshold(const Vec& y, double nu);
Vec prox_box_l1(const Vec& y, double nu, double bound);
Vec project_l2_ball(const Vec& u, double kappa);

// d_i = 1 iff |v_i| > nu (ties |v_i| = nu resolve to 0).
DiagMask clarke_mask_l1(const Vec& v, double nu);
// d_i = 1 iff |v_i| > nu and |soft_threshold(v_i, nu)| < bound (ties to 0).
DiagMask clarke_mask_box_l1(const Vec& v, double nu, double bound);
// Boundary case fixes t = 1, the limit of the exterior formula.
BallJacobian ball_jacobian(const Vec& u, double kappa);

}  // namespace bdc
