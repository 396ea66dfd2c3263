#include "bdc/ssn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bdc {

void SsnParams::validate() const {
  auto in = [](double v, double lo, double hi) { return v > lo && v < hi; };
  if (!in(mu_ls, 0.0, 0.5)) throw std::invalid_argument("ssn: mu_ls must be in (0, 1/2)");
  if (!in(delta_ls, 0.0, 1.0)) throw std::invalid_argument("ssn: delta_ls must be in (0, 1)");
  if (!in(eta_bar, 0.0, 1.0)) throw std::invalid_argument("ssn: eta_bar must be in (0, 1)");
  if (!(gamma_exp > 0.0 && gamma_exp <= 1.0))
    throw std::invalid_argument("ssn: gamma_exp must be in (0, 1]");
  if (!in(tau1, 0.0, 1.0) || !in(tau2, 0.0, 1.0))
    throw std::invalid_argument("ssn: tau1, tau2 must be in (0, 1)");
  if (max_inner < 1) throw std::invalid_argument("ssn: max_inner must be positive");
}

SsnParams default_ssn_params(std::size_t m) {
  SsnParams p;
  p.linear_solver = m <= 4000 ? LinearSolver::DenseCholesky : LinearSolver::ConjugateGradient;
  return p;
}

Vec solve_newton_system(const Mat& H, const Vec& grad, double eps, const SsnParams& params) {
  const std::size_t m = H.rows;
  require_dim(H.cols == m && grad.size() == m, "newton system");
  const double gnorm = norm2(grad);
  const double bound = std::min(params.eta_bar, std::pow(gnorm, 1.0 + params.gamma_exp));
  Vec rhs(m);
  kernels::scal(-1.0, grad.data(), rhs.data(), m);

  Mat Heps = H;
  if (eps != 0.0)
    for (std::size_t i = 0; i < m; ++i) Heps(i, i) += eps;

  Vec d;
  if (params.linear_solver == LinearSolver::DenseCholesky) {
    DenseCholesky chol;
    if (chol.factor(Heps)) {
      chol.solve(rhs, d);
      return d;
    }
    // fall through to CG on factorization failure
  }
  const double tol_rel = gnorm > 0.0 ? bound / gnorm : 0.0;
  pcg_jacobi(Heps, rhs, d, tol_rel, static_cast<int>(m));
  return d;
}

Vec newton_direction(const DualModel& model, const Vec& z, const Vec& grad,
                     const SsnParams& params) {
  Mat H;
  model.jacobian(z, H);
  double eps = 0.0;
  if (model.needs_regularization()) eps = params.tau1 * std::min(params.tau2, norm2(grad));
  return solve_newton_system(H, grad, eps, params);
}

namespace {

double armijo_with(const DualModel& model, const Vec& z, const Vec& d, double value0, double slope,
                   const SsnParams& params) {
  if (!(slope < 0.0)) throw std::invalid_argument("armijo_search: not a descent direction");
  const double eps = std::numeric_limits<double>::epsilon();
  // Once the predicted decrease falls under the rounding error of the
  // objective the comparison is pure noise and backtracking picks arbitrary
  // step sizes; for a short Newton step, take it unmodified instead (the
  // local phase of the method).
  if (params.mu_ls * -slope <= 16.0 * eps * (1.0 + std::abs(value0)) &&
      norm2sq(d) <= 1e-10 * (1.0 + norm2sq(z)))
    return 1.0;
  const double fp_slack = 4.0 * eps * std::abs(value0);
  Vec trial(z.size());
  double alpha = 1.0;
  for (int i = 0; i <= params.max_ls_halvings; ++i) {
    kernels::lincomb(1.0, z.data(), alpha, d.data(), trial.data(), z.size());
    if (model.value(trial) <= value0 + params.mu_ls * alpha * slope + fp_slack) return alpha;
    alpha *= params.delta_ls;
  }
  throw LineSearchExhausted("armijo_search: no acceptable step after 60 halvings");
}

}  // namespace

double armijo_search(const DualModel& model, const Vec& z, const Vec& d, const SsnParams& params) {
  Vec g;
  model.gradient(z, g);
  return armijo_with(model, z, d, model.value(z), dot(g, d), params);
}

SsnResult ssn_solve(const DualModel& model, Vec z0, const SsnAccept& accept,
                    const SsnParams& params) {
  params.validate();
  SsnResult res;
  res.z = std::move(z0);
  Vec g(model.dim());
  double best_gnorm = std::numeric_limits<double>::infinity();
  int no_improve = 0;
  for (int t = 0;; ++t) {
    model.gradient(res.z, g);
    const double gnorm = norm2(g);
    if (gnorm < 0.9 * best_gnorm)
      no_improve = 0;
    else
      ++no_improve;
    best_gnorm = std::min(best_gnorm, gnorm);
    const bool stagnated = no_improve >= 6;
    if (accept(res.z, g, t, stagnated)) {
      res.accepted = true;
      res.newton_steps = t;
      return res;
    }
    if (stagnated) no_improve = 0;  // re-arm; max_inner remains the backstop
    if (t == params.max_inner)
      throw SubsolverStalled("ssn_solve: acceptance not reached within max_inner iterations");
    if (gnorm == 0.0) continue;  // stationary but refused; only max_inner ends this
    Vec d = newton_direction(model, res.z, g, params);
    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      // CG corner case; the negative gradient always descends
      kernels::scal(-1.0, g.data(), d.data(), g.size());
      slope = -norm2sq(g);
    }
    double alpha;
    try {
      alpha = armijo_with(model, res.z, d, model.value(res.z), slope, params);
    } catch (const LineSearchExhausted&) {
      // no measurable descent left in double precision
      if (accept(res.z, g, t, true)) {
        res.accepted = true;
        res.newton_steps = t;
        return res;
      }
      throw;
    }
    kernels::axpy(alpha, d.data(), res.z.data(), res.z.size());
    res.final_step_unit = alpha == 1.0;
  }
}

}  // namespace bdc
