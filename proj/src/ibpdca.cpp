#include "bdc/ibpdca.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace bdc {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::ConvergedRelChange:
      return "converged_rel_change";
    case SolveStatus::ConvergedObjChange:
      return "converged_obj_change";
    case SolveStatus::MaxIter:
      return "max_iter";
  }
  return "unknown";
}

const char* to_string(Criterion c) { return c == Criterion::SC1 ? "sc1" : "sc2"; }

double SolverParams::gamma(int k) const {
  if (gamma_schedule) return gamma_schedule(k);
  return std::max(1.0 / std::sqrt(static_cast<double>(k + 1)), 0.1);
}

void SolverParams::validate() const {
  if (!(gamma_min > L)) throw std::invalid_argument("params: gamma_min must exceed L");
  if (!(gamma_max >= gamma_min)) throw std::invalid_argument("params: gamma_max < gamma_min");
  if (sigma < 0.0) throw std::invalid_argument("params: sigma must be >= 0");
  const double cap = criterion == Criterion::SC1 ? (gamma_min - L) / gamma_min
                                                 : (gamma_min - L) / gamma_max;
  if (!(sigma < cap))
    throw std::invalid_argument("params: sigma violates the admissible range for the criterion");
  if (max_outer < 1) throw std::invalid_argument("params: max_outer must be positive");
  if (consecutive_required < 1)
    throw std::invalid_argument("params: consecutive_required must be positive");
}

Vec subgrad_p2_norm(const Vec& x, double weight) {
  if (weight < 0.0) throw std::invalid_argument("subgrad_p2_norm: weight must be >= 0");
  const double nrm = norm2(x);
  Vec xi(x.size(), 0.0);
  if (nrm > 0.0 && weight > 0.0) kernels::scal(weight / nrm, x.data(), xi.data(), x.size());
  return xi;
}

namespace {

double criterion_lhs(const ErrorCertificate& cert, const Vec& x_k) {
  Vec diff(cert.x_next.size());
  kernels::lincomb(1.0, cert.x_next.data(), -1.0, x_k.data(), diff.data(), diff.size());
  return norm2sq(cert.delta_vec) + std::abs(dot(cert.delta_vec, diff)) + cert.delta_scalar;
}

}  // namespace

bool check_criterion(const ErrorCertificate& cert, const KernelModel& kernel, Criterion criterion,
                     double sigma, double gamma_k, const Vec& x_k, const Vec& x_prev,
                     double slack) {
  const double lhs = criterion_lhs(cert, x_k);
  const double dist = criterion == Criterion::SC1 ? kernel.bregman_distance(cert.x_next, x_k)
                                                  : kernel.bregman_distance(x_k, x_prev);
  return lhs <= sigma * gamma_k * dist + slack;
}

SolveReport run_ibpdca(const DcProblem& problem, SubproblemSolver& subsolver,
                       const SolverParams& params, const Vec& x0) {
  params.validate();
  const KernelModel& kernel = problem.kernel();
  const auto t_start = std::chrono::steady_clock::now();
  auto seconds_since_start = [&t_start] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  };

  SolveReport report;
  Vec x = x0;
  Vec x_prev = x0;
  double f_cur = problem.objective(x);
  if (!std::isfinite(f_cur)) throw NonFiniteObjective("objective not finite at x0");
  report.f_initial = f_cur;
  const double f0 = f_cur;

  double d_gap_prev = 0.0;  // D_phi(x^k, x^{k-1}); zero at k = 0
  double min_d_fwd = std::numeric_limits<double>::infinity();
  double delta_norm_prev = 0.0;
  Vec xi_prev, phi_grad_prev;
  double gamma_prev = 0.0;

  int rel_streak = 0, obj_streak = 0;
  report.status = SolveStatus::MaxIter;

  for (int k = 0; k < params.max_outer; ++k) {
    const double gamma_k = params.gamma(k);
    const Criterion crit_eff =
        (params.criterion == Criterion::SC2 && k == 0) ? Criterion::SC1 : params.criterion;
    Vec xi = subgrad_p2_norm(x, problem.p2_weight());

    IterRecord rec;
    rec.k = k;
    rec.objective = f_cur;
    if (k >= 1) {
      Vec pg = kernel.phi_grad(x);
      Vec pg_diff(pg.size());
      kernels::lincomb(1.0, pg.data(), -1.0, phi_grad_prev.data(), pg_diff.data(), pg.size());
      Vec xi_diff(xi.size());
      kernels::lincomb(1.0, xi.data(), -1.0, xi_prev.data(), xi_diff.data(), xi.size());
      rec.stat_res = delta_norm_prev + gamma_prev * norm2(pg_diff) + norm2(xi_diff);
      phi_grad_prev = std::move(pg);
    } else {
      phi_grad_prev = kernel.phi_grad(x);
    }

    SubsolveResult sub =
        subsolver.solve(x, x_prev, xi, gamma_k, params.sigma, crit_eff, params.strict_summable);
    const ErrorCertificate& cert = sub.cert;

    const double f_next = problem.objective(cert.x_next);
    if (!std::isfinite(f_next)) throw NonFiniteObjective("objective not finite at iterate");

    const double d_fwd = kernel.bregman_distance(cert.x_next, x);
    const double d_bwd = kernel.bregman_distance(x, cert.x_next);

    // certificate audit, independent of the subsolver's own arithmetic
    {
      const double lhs_re = criterion_lhs(cert, x);
      const double dist = crit_eff == Criterion::SC1 ? d_fwd : kernel.bregman_distance(x, x_prev);
      const double rhs_re = params.sigma * gamma_k * dist;
      const double tol = 1e-9 * (1.0 + std::abs(lhs_re) + std::abs(rhs_re));
      const bool sides_match =
          std::abs(lhs_re - cert.lhs) <= tol && std::abs(rhs_re - cert.rhs) <= tol;
      const bool holds =
          params.sigma == 0.0 || cert.exact_escape || lhs_re <= rhs_re + 1e-9;
      if (!sides_match || !holds) ++report.invariants.cert_recheck_failures;
    }

    // descent invariants (L and the 1e-9 slack per the monitoring contract)
    if (params.criterion == Criterion::SC1) {
      const double bound = f_cur - ((1.0 - params.sigma) * gamma_k - params.L) * d_fwd;
      if (f_next > bound + 1e-9) ++report.invariants.sc_descent_violations;
    } else {
      const double merit_cur = f_cur + params.sigma * params.gamma_max * d_gap_prev;
      const double merit_next = f_next + params.sigma * params.gamma_max * d_fwd;
      if (merit_next > merit_cur + 1e-9) ++report.invariants.sc_descent_violations;
    }

    // rate bound at every k: min_i D(x^{i+1}, x^i) over the first k+1 steps
    min_d_fwd = std::min(min_d_fwd, d_fwd);
    {
      const double denom = ((1.0 - params.sigma) * params.gamma_min - params.L) * (k + 1);
      const double bound = (f0 - f_next) / denom;
      if (min_d_fwd > bound + 1e-12 * (1.0 + std::abs(f0))) {
        ++report.invariants.rate_bound_violations;
      }
    }

    problem.on_accept(cert.x_next, report.invariants);

    rec.d_fwd = d_fwd;
    rec.d_bwd = d_bwd;
    rec.sc_lhs = cert.lhs;
    rec.sc_rhs = cert.rhs;
    rec.inner_iters = sub.inner_iters;

    report.inner_iters_total += sub.inner_iters;
    report.cert_constructions += sub.cert_constructions;
    if (sub.took_steps) {
      ++report.solves_with_steps;
      if (sub.final_step_unit) ++report.solves_final_unit_step;
    }

    // termination bookkeeping
    Vec dx(x.size());
    kernels::lincomb(1.0, cert.x_next.data(), -1.0, x.data(), dx.data(), x.size());
    const double rel_x = norm2(dx) / (1.0 + norm2(cert.x_next));
    const double rel_f = std::abs(f_next - f_cur) / (1.0 + std::abs(f_next));

    x_prev = std::move(x);
    x = cert.x_next;
    d_gap_prev = d_fwd;
    f_cur = f_next;
    delta_norm_prev = norm2(cert.delta_vec);
    xi_prev = std::move(xi);
    gamma_prev = gamma_k;

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
