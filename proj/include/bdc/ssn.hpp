#pragma once

#include <functional>
#include <stdexcept>

#include "bdc/linalg.hpp"

namespace bdc {

// Inner solver exceeded its iteration cap without the acceptance predicate
// firing. Never swallowed; the outer loop propagates it to the caller.
struct SubsolverStalled : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LineSearchExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class LinearSolver { DenseCholesky, ConjugateGradient };

struct SsnParams {
  double mu_ls = 1e-4;      // Armijo slope fraction
  double delta_ls = 0.5;    // backtracking factor
  double eta_bar = 1e-3;    // forcing term cap
  double gamma_exp = 0.2;   // forcing exponent: residual <= min(eta_bar, ||g||^(1+gamma_exp))
  double tau1 = 0.99;       // adaptive regularization eps_t = tau1*min(tau2, ||g||)
  double tau2 = 1e-6;
  int max_inner = 100;
  int max_ls_halvings = 60;  // below double-precision resolution of delta^i
  LinearSolver linear_solver = LinearSolver::DenseCholesky;

  void validate() const;
};

// Dense solves up to m = 4000, preconditioned CG beyond.
SsnParams default_ssn_params(std::size_t m);

// One dual subproblem: value/gradient of Psi, and a generalized Jacobian
// element assembled as a dense symmetric matrix. needs_regularization marks
// duals whose Jacobian elements may only be positive semidefinite.
class DualModel {
 public:
  virtual ~DualModel() = default;
  virtual std::size_t dim() const = 0;
  virtual bool needs_regularization() const = 0;
  virtual double value(const Vec& z) const = 0;
  virtual void gradient(const Vec& z, Vec& g) const = 0;
  virtual void jacobian(const Vec& z, Mat& H) const = 0;
};

// Solves (H + eps*I) d = -grad to residual norm <= min(eta_bar, ||grad||^(1+gamma_exp)).
// Cholesky when selected (falls back to CG if the factorization fails); CG
// runs at most dim iterations and returns its best iterate.
Vec solve_newton_system(const Mat& H, const Vec& grad, double eps, const SsnParams& params);

// Assembles the Jacobian element at z and solves the regularized system.
// pre: grad = model.gradient(z)
Vec newton_direction(const DualModel& model, const Vec& z, const Vec& grad,
                     const SsnParams& params);

// Backtracking line search: the smallest i with
// Psi(z + delta^i d) <= Psi(z) + mu*delta^i*<grad Psi(z), d>.
// pre: d is a descent direction; throws std::invalid_argument otherwise.
double armijo_search(const DualModel& model, const Vec& z, const Vec& d, const SsnParams& params);

struct SsnResult {
  Vec z;
  int newton_steps = 0;
  bool accepted = false;
  bool final_step_unit = false;  // last Newton step took alpha = 1
};

// accept(z, grad, t, stagnated) is evaluated before each Newton step (so a
// sufficient warm start is accepted with zero steps) and is expected to
// capture whatever certificate it builds. stagnated reports that the engine
// can no longer reduce the gradient norm in double precision (no 10%
// improvement over several steps, or the line search bottomed out); callers
// decide whether that state is acceptable. Throws SubsolverStalled after
// max_inner steps.
using SsnAccept = std::function<bool(const Vec& z, const Vec& grad, int t, bool stagnated)>;

SsnResult ssn_solve(const DualModel& model, Vec z0, const SsnAccept& accept,
                    const SsnParams& params);

}  // namespace bdc
