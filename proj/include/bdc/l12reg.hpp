#pragma once

#include "bdc/datagen_io.hpp"
#include "bdc/ibpdca.hpp"
#include "bdc/prox_ops.hpp"
#include "bdc/ssn.hpp"

// The l1-2 regularized least squares application:
//   F_reg(x) = 1/2 ||A x - b||^2 + lambda*(||x||_1 - ||x||)
// with the DC split P1(x) = lambda*||x||_1 + 1/2 ||A x - b||^2, P2 = lambda*||x||,
// f = 0, and the quadratic kernel. Each subproblem is solved through its dual
// by semi-smooth Newton; the certificate is (w, -A^T e, 0) where e is the dual
// gradient at the accepted point.

namespace bdc {

class RegProblem : public DcProblem {
 public:
  // Validates that A has no zero columns (required for level-boundedness).
  RegProblem(ProblemInstance instance, double lambda);

  const ProblemInstance& instance() const { return inst_; }
  const Mat& A() const { return inst_.A; }
  const Vec& b() const { return inst_.b; }
  double lambda() const { return lambda_; }

  const KernelModel& kernel() const override { return kernel_; }
  double objective(const Vec& x) const override;
  double p2_weight() const override { return lambda_; }

 private:
  ProblemInstance inst_;
  double lambda_;
  KernelModel kernel_;
};

double objective_reg(const RegProblem& p, const Vec& x);

// State of the dual at a point z: v = x_k + xi/gamma - A^T z/gamma,
// w = soft_threshold(v, lambda/gamma), e = grad Psi(z) = -A w + z + b.
struct RegDualState {
  Vec z, v, w, e;
};

class RegDualModel : public DualModel {
 public:
  RegDualModel(const Mat& A, const Vec& b, double lambda, double gamma, const Vec& x_k,
               const Vec& xi_k);

  std::size_t dim() const override { return A_.rows; }
  bool needs_regularization() const override { return false; }
  double value(const Vec& z) const override;
  void gradient(const Vec& z, Vec& g) const override;
  void jacobian(const Vec& z, Mat& H) const override;

  void eval(const Vec& z, RegDualState& st) const;
  // v(z) = x_k + xi/gamma - A^T z / gamma
  Vec v_of(const Vec& z) const;
  double prox_threshold() const { return lambda_ / gamma_; }

 private:
  const Mat& A_;
  const Vec& b_;
  double lambda_, gamma_;
  Vec base_v_;  // x_k + xi/gamma
  double xk_nrmsq_;
};

double dual_value_reg(const RegProblem& p, const Vec& x_k, const Vec& xi_k, double gamma_k,
                      const Vec& z);
Vec dual_grad_reg(const RegProblem& p, const Vec& x_k, const Vec& xi_k, double gamma_k,
                  const Vec& z);
// I + gamma^{-1} A_J A_J^T with J the active set of the l1 prox at v(z).
Mat reg_jacobian_element(const RegProblem& p, const Vec& x_k, const Vec& xi_k, double gamma_k,
                         const Vec& z);

// Stateful subsolver owning the SSN warm start (zero at the first outer
// iteration, previous approximate dual solution afterwards).
class RegSubsolver : public SubproblemSolver {
 public:
  explicit RegSubsolver(const RegProblem& p, SsnParams ssn = {});

  SubsolveResult solve(const Vec& x_k, const Vec& x_prev, const Vec& xi_k, double gamma_k,
                       double sigma, Criterion criterion, bool strict) override;

  const Vec& warm_start() const { return z_warm_; }
  // sigma = 0 degenerates to an exact solve: accept when ||grad Psi|| falls
  // below this tolerance.
  double exact_tol() const { return exact_tol_; }

 private:
  const RegProblem& p_;
  SsnParams ssn_;
  Vec z_warm_;
  double exact_tol_;
  double stall_tol_;  // exactness threshold once the dual stops improving
};

}  // namespace bdc
