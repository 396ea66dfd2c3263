#pragma once

#include "bdc/datagen_io.hpp"
#include "bdc/ibpdca.hpp"
#include "bdc/prox_ops.hpp"
#include "bdc/ssn.hpp"

// The constrained l1-2 sparse optimization application:
//   min ||x||_1 - mu*||x||  s.t.  ||A x - b|| <= kappa, ||x||_inf <= M
// with M = (1-mu)^{-1}(||A'b||_1 - mu*||A'b||), kernel
// phi(x) = 1/2 ||x||^2 + 1/2 ||A x||^2, and dual SSN subproblem solves whose
// approximate primal points are retracted towards the strictly feasible
// anchor x_feas = A'b before certificates are built.

namespace bdc {

struct RankDeficient : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateBound : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InfeasibleCertificate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A^T (A A^T)^{-1} b through a Cholesky factorization of A A^T.
Vec pseudo_inverse_apply(const Mat& A, const Vec& b);

// M = (1-mu)^{-1} (||A'b||_1 - mu*||A'b||); throws DegenerateBound when A'b = 0.
double compute_M(double mu, const Mat& A, const Vec& b);

class ConProblem : public DcProblem {
 public:
  // kappa must lie in (0, ||b||); M and x_feas are derived from A, b, mu.
  ConProblem(ProblemInstance instance, double mu, double kappa);

  const ProblemInstance& instance() const { return inst_; }
  const Mat& A() const { return inst_.A; }
  const Vec& b() const { return inst_.b; }
  double mu() const { return mu_; }
  double kappa() const { return kappa_; }
  double M() const { return M_; }
  const Vec& x_feas() const { return x_feas_; }
  const Vec& Ax_feas() const { return ax_feas_; }
  double feas_residual() const { return feas_res_; }

  const KernelModel& kernel() const override { return kernel_; }
  // ||x||_1 - mu*||x||; feasibility is tracked separately.
  double objective(const Vec& x) const override;
  double p2_weight() const override { return mu_; }
  void on_accept(const Vec& x_next, InvariantCounters& counters) const override;

  double feasibility_violation(const Vec& x) const;

 private:
  ProblemInstance inst_;
  double mu_, kappa_, M_;
  Vec x_feas_, ax_feas_;
  double feas_res_;
  KernelModel kernel_;
};

// (objective value, constraint violation max(||Ax-b||-kappa, ||x||_inf-M, 0))
std::pair<double, double> objective_con(const ConProblem& p, const Vec& x);

// Convex pullback onto the feasible set of the subproblem: w_tilde =
// rho*w + (1-rho)*x_feas with rho = 1 when w already satisfies the ball
// constraint. pre: ||w||_inf <= M.
struct Retraction {
  Vec w_tilde;
  double rho = 1.0;
};
Retraction retract(const ConProblem& p, const Vec& w);

// Certificate pieces of one dual iterate (see the acceptance rule below):
// Delta enters the inexactness condition, (d1, delta1) certifies an
// eps-subgradient of g at w_tilde, (d2, delta2) one of the ball indicator.
struct ConCertificateParts {
  Vec w;
  Vec w_tilde;
  double rho = 1.0;
  Vec Delta;
  Vec d1, d2;
  double delta1 = 0.0, delta2 = 0.0;
};

struct ConDualState {
  Vec z;
  Vec ux;   // s^k - A^T z / gamma
  Vec w;    // prox of g at ux
  Vec uy;   // b^k + z / gamma
  Vec pu;   // ball projection of uy
  Vec e;    // grad Psi(z) = -A w + pu + b
  Vec Aw;   // pu + b - e
};

class ConDualModel : public DualModel {
 public:
  ConDualModel(const ConProblem& p, double gamma, const Vec& x_k, const Vec& xi_k);

  std::size_t dim() const override { return p_.A().rows; }
  bool needs_regularization() const override { return true; }
  double value(const Vec& z) const override;
  void gradient(const Vec& z, Vec& g) const override;
  void jacobian(const Vec& z, Mat& H) const override;

  void eval(const Vec& z, ConDualState& st) const;
  const Vec& s_k() const { return s_; }
  const Vec& b_k() const { return bk_; }
  const Vec& Ax_k() const { return ax_k_; }
  double gamma() const { return gamma_; }

 private:
  const ConProblem& p_;
  double gamma_;
  Vec s_;     // x_k + xi/gamma
  Vec bk_;    // A x_k - b
  Vec ax_k_;  // A x_k
  double s_nrmsq_, bk_nrmsq_;
};

Vec dual_grad_con(const ConProblem& p, const Vec& x_k, const Vec& xi_k, double gamma_k,
                  const Vec& z);
double dual_value_con(const ConProblem& p, const Vec& x_k, const Vec& xi_k, double gamma_k,
                      const Vec& z);
// gamma^{-1}(A_J A_J^T + B) with J from the box-l1 prox mask and B an element
// of the Clarke Jacobian of the ball projection.
Mat con_jacobian_element(const ConProblem& p, const Vec& x_k, const Vec& xi_k, double gamma_k,
                         const Vec& z);

// Builds the full certificate at (z, w, e); w and e must be consistent with z.
ConCertificateParts con_certificate(const ConProblem& p, const Vec& x_k, const Vec& xi_k,
                                    double gamma_k, const Vec& z, const Vec& w, const Vec& e);

class ConSubsolver : public SubproblemSolver {
 public:
  explicit ConSubsolver(const ConProblem& p, SsnParams ssn = {});

  // Under SC2 the acceptance test follows the economical rule: the gate
  // epsilon_k (the full SC2 right-hand side) is computed once per outer
  // iteration, and retraction plus certificate construction are deferred
  // until ||grad Psi(z)|| <= epsilon_k.
  SubsolveResult solve(const Vec& x_k, const Vec& x_prev, const Vec& xi_k, double gamma_k,
                       double sigma, Criterion criterion, bool strict) override;

  const Vec& warm_start() const { return z_warm_; }
  const ConCertificateParts& last_parts() const { return last_parts_; }
  double exact_tol() const { return exact_tol_; }

 private:
  const ConProblem& p_;
  SsnParams ssn_;
  Vec z_warm_;
  double exact_tol_;
  double stall_tol_;  // exactness threshold once the dual stops improving
  ConCertificateParts last_parts_;
};

}  // namespace bdc
