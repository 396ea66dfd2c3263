#include "bdc/baselines.hpp"

#include <chrono>
#include <cmath>

#include "bdc/datagen_io.hpp"

namespace bdc {

double power_method_lmax(const Mat& A, double tol, int max_it) {
  const std::size_t n = A.cols;
  if (A.rows == 0 || n == 0) throw std::invalid_argument("power_method_lmax: empty matrix");
  NormalSampler gauss(0x9e3779b9u);
  Vec v(n);
  for (auto& vi : v) vi = gauss.next();
  double nv = norm2(v);
  if (nv == 0.0) {
    v.assign(n, 1.0);
    nv = std::sqrt(static_cast<double>(n));
  }
  kernels::scal(1.0 / nv, v.data(), v.data(), n);

  Vec av, u;
  for (int it = 0; it < max_it; ++it) {
    gemv_n(A, v, av);
    gemv_t(A, av, u);  // u = A^T A v
    const double rho = norm2sq(av);
    Vec r(n);
    kernels::lincomb(1.0, u.data(), -rho, v.data(), r.data(), n);
    if (rho == 0.0) throw std::invalid_argument("power_method_lmax: A is zero");
    if (norm2(r) / rho <= tol) return rho * (1.0 + 10.0 * tol);
    const double un = norm2(u);
    if (un == 0.0) throw NoConvergence("power_method_lmax: degenerate iterate");
    kernels::scal(1.0 / un, u.data(), v.data(), n);
  }
  throw NoConvergence("power_method_lmax: no convergence within max_it");
}

FistaResult fista_l1ls(const Mat& A, const Vec& b, double lambda, int iters) {
  if (!(lambda > 0.0)) throw std::invalid_argument("fista_l1ls: lambda must be > 0");
  const std::size_t m = A.rows, n = A.cols;
  require_dim(b.size() == m, "fista_l1ls");

  // ||A||_F^2 / n <= lambda_max(A^T A), a valid backtracking seed
  double L = std::max(kernels::nrm2sq(A.data.data(), A.data.size()) / static_cast<double>(n),
                      1e-12);

  auto objective = [&](const Vec& x, const Vec& ax) {
    Vec r(m);
    kernels::lincomb(1.0, ax.data(), -1.0, b.data(), r.data(), m);
    return 0.5 * norm2sq(r) + lambda * norm1(x);
  };

  Vec x(n, 0.0), x_prev(n, 0.0);
  Vec ax(m, 0.0), ax_prev(m, 0.0);
  double t = 1.0;
  Vec y = x, ay = ax;
  Vec grad(n), cand(n), acand(m), diff(n);

  for (int k = 0; k < iters; ++k) {
    Vec ry(m);
    kernels::lincomb(1.0, ay.data(), -1.0, b.data(), ry.data(), m);
    gemv_t(A, ry, grad);
    const double hy = 0.5 * norm2sq(ry);
    for (;;) {
      Vec step(n);
      kernels::lincomb(1.0, y.data(), -1.0 / L, grad.data(), step.data(), n);
      kernels::soft_threshold(step.data(), lambda / L, cand.data(), n);
      gemv_n(A, cand, acand);
      Vec rc(m);
      kernels::lincomb(1.0, acand.data(), -1.0, b.data(), rc.data(), m);
      kernels::lincomb(1.0, cand.data(), -1.0, y.data(), diff.data(), n);
      const double lhs = 0.5 * norm2sq(rc);
      const double rhs = hy + dot(grad, diff) + 0.5 * L * norm2sq(diff);
      if (lhs <= rhs + 1e-12 * (1.0 + std::abs(rhs))) break;
      L *= 2.0;
    }
    x_prev.swap(x);
    ax_prev.swap(ax);
    x = cand;
    ax = acand;
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double beta = (t - 1.0) / t_next;
    t = t_next;
    kernels::lincomb(1.0 + beta, x.data(), -beta, x_prev.data(), y.data(), n);
    kernels::lincomb(1.0 + beta, ax.data(), -beta, ax_prev.data(), ay.data(), m);
  }

  FistaResult res;
  res.objective = objective(x, ax);
  res.x = std::move(x);
  res.final_L = L;
  res.iters = iters;
  return res;
}

SolveReport pdcae_solve(const RegProblem& p, const PdcaeParams& params, const Vec& x0) {
  const Mat& A = p.A();
  const Vec& b = p.b();
  const std::size_t m = A.rows, n = A.cols;
  require_dim(x0.size() == n, "pdcae_solve");
  const double L = params.L_A > 0.0 ? params.L_A : power_method_lmax(A);
  const double lambda = p.lambda();

  const auto t_start = std::chrono::steady_clock::now();
  auto seconds_since_start = [&t_start] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  };

  SolveReport report;
  Vec x = x0, x_prev = x0;
  Vec ax, ax_prev;
  gemv_n(A, x, ax);
  ax_prev = ax;
  Vec y(n), ay(m), ry(m), grad(n), u(n), x_next(n), ax_next(m);

  double f_cur = p.objective(x);
  if (!std::isfinite(f_cur)) throw NonFiniteObjective("pdcae: objective not finite at x0");
  report.f_initial = f_cur;
  double theta = 1.0;
  int rel_streak = 0, obj_streak = 0;
  report.status = SolveStatus::MaxIter;

  for (int k = 0; k < params.max_iter; ++k) {
    const Vec xi = subgrad_p2_norm(x, lambda);
    const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
    const double beta = (theta - 1.0) / theta_next;
    theta = theta_next;
    kernels::lincomb(1.0 + beta, x.data(), -beta, x_prev.data(), y.data(), n);
    kernels::lincomb(1.0 + beta, ax.data(), -beta, ax_prev.data(), ay.data(), m);

    kernels::lincomb(1.0, ay.data(), -1.0, b.data(), ry.data(), m);
    gemv_t(A, ry, grad);
    kernels::axpy(-1.0, xi.data(), grad.data(), n);  // A^T(Ay-b) - xi
    kernels::lincomb(1.0, y.data(), -1.0 / L, grad.data(), u.data(), n);
    kernels::soft_threshold(u.data(), lambda / L, x_next.data(), n);
    gemv_n(A, x_next, ax_next);

    const double f_next = p.objective(x_next);
    if (!std::isfinite(f_next)) throw NonFiniteObjective("pdcae: objective not finite");

    IterRecord rec;
    rec.k = k;
    rec.objective = f_cur;
    Vec dx(n);
    kernels::lincomb(1.0, x_next.data(), -1.0, x.data(), dx.data(), n);
    rec.d_fwd = 0.5 * norm2sq(dx);
    rec.d_bwd = rec.d_fwd;

    const double rel_x = norm2(dx) / (1.0 + norm2(x_next));
    const double rel_f = std::abs(f_next - f_cur) / (1.0 + std::abs(f_next));

    // restart tests on (y^{k-1}, x^k=x_next, x^{k-1}=x)
    bool restart = false;
    if (params.restart == RestartRule::Fixed || params.restart == RestartRule::Both)
      restart |= (k + 1) % params.fixed_restart_period == 0;
    if (params.restart == RestartRule::Adaptive || params.restart == RestartRule::Both) {
      Vec yx(n);
      kernels::lincomb(1.0, y.data(), -1.0, x_next.data(), yx.data(), n);
      restart |= dot(yx, dx) > 0.0;
    }
    if (restart) theta = 1.0;

    x_prev.swap(x);
    ax_prev.swap(ax);
    x = x_next;
    ax = ax_next;
    f_cur = f_next;

    rec.elapsed = seconds_since_start();
    report.trajectory.push_back(rec);
    report.outer_iters = k + 1;

    rel_streak = (rel_x < params.tol_x && rel_f < params.tol_f_pair) ? rel_streak + 1 : 0;
    obj_streak = rel_f < params.tol_f_only ? obj_streak + 1 : 0;
    if (rel_streak >= params.consecutive_required) {
      report.status = SolveStatus::ConvergedRelChange;
      break;
    }
    if (obj_streak >= params.consecutive_required) {
      report.status = SolveStatus::ConvergedObjChange;
      break;
    }
  }

  report.x_final = std::move(x);
  report.f_final = f_cur;
  report.wall_time = seconds_since_start();
  return report;
}

}  // namespace bdc
