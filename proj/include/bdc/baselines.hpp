#pragma once

#include "bdc/l12reg.hpp"

namespace bdc {

struct NoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Power iteration estimate of lambda_max(A^T A), inflated by (1 + 10*tol) so
// the returned value is a usable upper bound for step sizes.
double power_method_lmax(const Mat& A, double tol = 1e-6, int max_it = 5000);

struct FistaResult {
  Vec x;
  double objective = 0.0;
  double final_L = 0.0;  // last backtracked curvature estimate
  int iters = 0;
};

// FISTA with backtracking on min lambda*||x||_1 + 1/2||Ax-b||^2 from x = 0,
// run for exactly `iters` steps. The initial curvature estimate ||A||_F^2/n
// never exceeds lambda_max(A^T A), so backtracking keeps the step size above
// 1/(2*lambda_max).
FistaResult fista_l1ls(const Mat& A, const Vec& b, double lambda, int iters = 200);

enum class RestartRule { Fixed, Adaptive, Both };

struct PdcaeParams {
  double L_A = 0.0;  // lambda_max(A^T A) upper bound; 0 means compute internally
  RestartRule restart = RestartRule::Both;
  int fixed_restart_period = 200;
  int max_iter = 30000;
  double tol_x = 1e-7;
  double tol_f_pair = 1e-7;
  double tol_f_only = 1e-10;
  int consecutive_required = 3;
};

// Proximal DC with extrapolation on the l1-2 regularized problem, with the
// FISTA theta-sequence for beta_k, a fixed restart every 200 iterations and
// an adaptive restart when <y^{k-1} - x^k, x^k - x^{k-1}> > 0. Termination
// matches the iBPDCA rule.
SolveReport pdcae_solve(const RegProblem& p, const PdcaeParams& params, const Vec& x0);

}  // namespace bdc
