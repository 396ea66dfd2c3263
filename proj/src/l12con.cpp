#include "bdc/l12con.hpp"

#include <algorithm>
#include <cmath>

namespace bdc {

namespace {
// stagnation escapes may miss the criterion by at most half the 1e-9
// descent-monitor slack
constexpr double kEscapeBudget = 5e-10;
}  // namespace

Vec pseudo_inverse_apply(const Mat& A, const Vec& b) {
  require_dim(b.size() == A.rows, "pseudo_inverse_apply");
  const std::size_t m = A.rows;
  Mat G(m, m);
  for (std::size_t j = 0; j < A.cols; ++j)
    kernels::rank1_update(G.data.data(), m, A.col(j), 1.0, m);
  DenseCholesky chol;
  if (!chol.factor(G))
    throw RankDeficient("pseudo_inverse_apply: A A^T is not positive definite");
  Vec u;
  chol.solve(b, u);
  Vec x;
  gemv_t(A, u, x);
  return x;
}

double compute_M(double mu, const Mat& A, const Vec& b) {
  if (!(mu >= 0.0 && mu < 1.0)) throw std::invalid_argument("compute_M: mu must be in [0, 1)");
  const Vec x = pseudo_inverse_apply(A, b);
  const double n2 = norm2(x);
  if (n2 == 0.0) throw DegenerateBound("compute_M: A'b = 0 gives an empty bound");
  return (norm1(x) - mu * n2) / (1.0 - mu);
}

ConProblem::ConProblem(ProblemInstance instance, double mu, double kappa)
    : inst_(std::move(instance)),
      mu_(mu),
      kappa_(kappa),
      kernel_(KernelModel::quadratic_plus_gram(inst_.A)) {
  if (!(mu >= 0.0 && mu < 1.0)) throw std::invalid_argument("l12con: mu must be in [0, 1)");
  const double bn = norm2(inst_.b);
  if (!(kappa > 0.0 && kappa < bn))
    throw std::invalid_argument("l12con: kappa must lie in (0, ||b||)");
  x_feas_ = pseudo_inverse_apply(inst_.A, inst_.b);
  const double n2 = norm2(x_feas_);
  if (n2 == 0.0) throw DegenerateBound("l12con: A'b = 0");
  M_ = (norm1(x_feas_) - mu_ * n2) / (1.0 - mu_);
  gemv_n(inst_.A, x_feas_, ax_feas_);
  Vec r(inst_.m());
  kernels::lincomb(1.0, ax_feas_.data(), -1.0, inst_.b.data(), r.data(), inst_.m());
  feas_res_ = norm2(r);
  if (!(feas_res_ < kappa_))
    throw std::invalid_argument("l12con: x_feas is not strictly feasible for the ball");
  if (norm_inf(x_feas_) > M_ + 1e-12)
    throw std::invalid_argument("l12con: x_feas violates the box bound");
}

double ConProblem::objective(const Vec& x) const {
  require_dim(x.size() == inst_.n(), "objective_con");
  return norm1(x) - mu_ * norm2(x);
}

double ConProblem::feasibility_violation(const Vec& x) const {
  Vec r;
  gemv_n(inst_.A, x, r);
  kernels::axpy(-1.0, inst_.b.data(), r.data(), r.size());
  return std::max({norm2(r) - kappa_, norm_inf(x) - M_, 0.0});
}

void ConProblem::on_accept(const Vec& x_next, InvariantCounters& counters) const {
  counters.max_feas_violation =
      std::max(counters.max_feas_violation, feasibility_violation(x_next));
}

std::pair<double, double> objective_con(const ConProblem& p, const Vec& x) {
  return {p.objective(x), p.feasibility_violation(x)};
}

Retraction retract(const ConProblem& p, const Vec& w) {
  Vec aw;
  gemv_n(p.A(), w, aw);
  Vec r(aw.size());
  kernels::lincomb(1.0, aw.data(), -1.0, p.b().data(), r.data(), aw.size());
  const double res = norm2(r);
  Retraction out;
  if (res <= p.kappa()) {
    out.w_tilde = w;
    out.rho = 1.0;
    return out;
  }
  out.rho = (p.kappa() - p.feas_residual()) / (res - p.feas_residual());
  out.w_tilde.resize(w.size());
  kernels::lincomb(out.rho, w.data(), 1.0 - out.rho, p.x_feas().data(), out.w_tilde.data(),
                   w.size());
  return out;
}

ConDualModel::ConDualModel(const ConProblem& p, double gamma, const Vec& x_k, const Vec& xi_k)
    : p_(p), gamma_(gamma) {
  require_dim(x_k.size() == p.instance().n() && xi_k.size() == p.instance().n(), "con dual model");
  if (!(gamma > 0.0)) throw std::invalid_argument("con dual: gamma must be > 0");
  s_.resize(x_k.size());
  kernels::lincomb(1.0, x_k.data(), 1.0 / gamma, xi_k.data(), s_.data(), x_k.size());
  gemv_n(p.A(), x_k, ax_k_);
  bk_.resize(ax_k_.size());
  kernels::lincomb(1.0, ax_k_.data(), -1.0, p.b().data(), bk_.data(), ax_k_.size());
  s_nrmsq_ = norm2sq(s_);
  bk_nrmsq_ = norm2sq(bk_);
}

void ConDualModel::eval(const Vec& z, ConDualState& st) const {
  const std::size_t m = p_.A().rows;
  const std::size_t n = p_.A().cols;
  st.z = z;
  Vec atz;
  gemv_t(p_.A(), z, atz);
  st.ux.resize(n);
  kernels::lincomb(1.0, s_.data(), -1.0 / gamma_, atz.data(), st.ux.data(), n);
  st.w.resize(n);
  kernels::soft_threshold_clamp(st.ux.data(), 1.0 / gamma_, p_.M(), st.w.data(), n);
  st.uy.resize(m);
  kernels::lincomb(1.0, bk_.data(), 1.0 / gamma_, z.data(), st.uy.data(), m);
  st.pu = project_l2_ball(st.uy, p_.kappa());
  gemv_n(p_.A(), st.w, st.Aw);
  st.e.resize(m);
  for (std::size_t i = 0; i < m; ++i) st.e[i] = -st.Aw[i] + st.pu[i] + p_.b()[i];
}

double ConDualModel::value(const Vec& z) const {
  const std::size_t m = p_.A().rows;
  const std::size_t n = p_.A().cols;
  Vec atz;
  gemv_t(p_.A(), z, atz);
  Vec ux(n);
  kernels::lincomb(1.0, s_.data(), -1.0 / gamma_, atz.data(), ux.data(), n);
  Vec w(n);
  kernels::soft_threshold_clamp(ux.data(), 1.0 / gamma_, p_.M(), w.data(), n);
  Vec wu(n);
  kernels::lincomb(1.0, w.data(), -1.0, ux.data(), wu.data(), n);
  Vec uy(m);
  kernels::lincomb(1.0, bk_.data(), 1.0 / gamma_, z.data(), uy.data(), m);
  const Vec pu = project_l2_ball(uy, p_.kappa());
  Vec pd(m);
  kernels::lincomb(1.0, pu.data(), -1.0, uy.data(), pd.data(), m);
  return dot(z, p_.b()) + 0.5 * gamma_ * norm2sq(ux) - norm1(w) - 0.5 * gamma_ * norm2sq(wu) +
         0.5 * gamma_ * norm2sq(uy) - 0.5 * gamma_ * norm2sq(pd) - 0.5 * gamma_ * s_nrmsq_ -
         0.5 * gamma_ * bk_nrmsq_;
}

void ConDualModel::gradient(const Vec& z, Vec& g) const {
  ConDualState st;
  eval(z, st);
  g = std::move(st.e);
}

void ConDualModel::jacobian(const Vec& z, Mat& H) const {
  const std::size_t m = p_.A().rows;
  const std::size_t n = p_.A().cols;
  Vec atz;
  gemv_t(p_.A(), z, atz);
  Vec ux(n);
  kernels::lincomb(1.0, s_.data(), -1.0 / gamma_, atz.data(), ux.data(), n);
  const DiagMask mask = clarke_mask_box_l1(ux, 1.0 / gamma_, p_.M());
  Vec uy(m);
  kernels::lincomb(1.0, bk_.data(), 1.0 / gamma_, z.data(), uy.data(), m);
  const BallJacobian B = ball_jacobian(uy, p_.kappa());

  const double c = 1.0 / gamma_;
  H = Mat(m, m);
  for (std::size_t i = 0; i < m; ++i) H(i, i) = c * B.c;
  if (B.beta != 0.0) kernels::rank1_update(H.data.data(), m, B.u.data(), c * B.beta, m);
  for (std::size_t j : mask.active_indices())
    kernels::rank1_update(H.data.data(), m, p_.A().col(j), c, m);
}

Vec dual_grad_con(const ConProblem& p, const Vec& x_k, const Vec& xi_k, double gamma_k,
                  const Vec& z) {
  Vec g;
  ConDualModel(p, gamma_k, x_k, xi_k).gradient(z, g);
  return g;
}

double dual_value_con(const ConProblem& p, const Vec& x_k, const Vec& xi_k, double gamma_k,
                      const Vec& z) {
  return ConDualModel(p, gamma_k, x_k, xi_k).value(z);
}

Mat con_jacobian_element(const ConProblem& p, const Vec& x_k, const Vec& xi_k, double gamma_k,
                         const Vec& z) {
  Mat H;
  ConDualModel(p, gamma_k, x_k, xi_k).jacobian(z, H);
  return H;
}

namespace {

ConCertificateParts build_certificate(const ConProblem& p, const ConDualModel& model,
                                      const ConDualState& st) {
  const std::size_t m = p.A().rows;
  const std::size_t n = p.A().cols;
  const double gamma = model.gamma();
  ConCertificateParts parts;
  parts.w = st.w;

  Vec r(m);
  kernels::lincomb(1.0, st.Aw.data(), -1.0, p.b().data(), r.data(), m);
  const double res = norm2(r);
  Vec a_wt(m);
  if (res <= p.kappa()) {
    parts.rho = 1.0;
    parts.w_tilde = st.w;
    a_wt = st.Aw;
  } else {
    parts.rho = (p.kappa() - p.feas_residual()) / (res - p.feas_residual());
    parts.w_tilde.resize(n);
    kernels::lincomb(parts.rho, st.w.data(), 1.0 - parts.rho, p.x_feas().data(),
                     parts.w_tilde.data(), n);
    kernels::lincomb(parts.rho, st.Aw.data(), 1.0 - parts.rho, p.Ax_feas().data(), a_wt.data(), m);
  }

  // feasibility of the retracted point, before it is certified
  {
    Vec rt(m);
    kernels::lincomb(1.0, a_wt.data(), -1.0, p.b().data(), rt.data(), m);
    if (norm2(rt) - p.kappa() > 1e-10 || norm_inf(parts.w_tilde) - p.M() > 1e-10)
      throw InfeasibleCertificate("retracted point violates the subproblem constraints");
  }

  Vec dw(n);  // w_tilde - w
  kernels::lincomb(1.0, parts.w_tilde.data(), -1.0, st.w.data(), dw.data(), n);
  Vec a_dw(m);  // A (w_tilde - w)
  kernels::lincomb(1.0, a_wt.data(), -1.0, st.Aw.data(), a_dw.data(), m);

  parts.d1.resize(n);
  kernels::lincomb(gamma, st.ux.data(), -gamma, st.w.data(), parts.d1.data(), n);
  parts.delta1 = (norm1(parts.w_tilde) - norm1(st.w)) - dot(parts.d1, dw);
  if (parts.delta1 < 0.0) {
    if (parts.delta1 < -1e-12)
      throw InfeasibleCertificate("delta1 negative beyond the floating-point guard");
    parts.delta1 = 0.0;
  }

  parts.d2.resize(m);
  kernels::lincomb(gamma, st.uy.data(), -gamma, st.pu.data(), parts.d2.data(), m);
  Vec ed(m);  // e - A(w_tilde - w)
  kernels::lincomb(1.0, st.e.data(), -1.0, a_dw.data(), ed.data(), m);
  parts.delta2 = std::abs(dot(ed, parts.d2));

  Vec at_e, at_adw;
  gemv_t(p.A(), st.e, at_e);
  gemv_t(p.A(), a_dw, at_adw);
  parts.Delta.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    parts.Delta[i] = gamma * (-at_e[i] + dw[i] + at_adw[i]);
  return parts;
}

}  // namespace

ConCertificateParts con_certificate(const ConProblem& p, const Vec& x_k, const Vec& xi_k,
                                    double gamma_k, const Vec& z, const Vec& w, const Vec& e) {
  ConDualModel model(p, gamma_k, x_k, xi_k);
  ConDualState st;
  model.eval(z, st);
  // callers must pass (w, e) consistent with z
  require_dim(w.size() == st.w.size() && e.size() == st.e.size(), "con_certificate");
  return build_certificate(p, model, st);
}

ConSubsolver::ConSubsolver(const ConProblem& p, SsnParams ssn)
    : p_(p), ssn_(ssn), z_warm_(p.instance().m(), 0.0) {
  exact_tol_ = 1e-12 * (1.0 + norm2(p.b()));
  stall_tol_ = 1e-9 * (1.0 + norm2(p.b()));
}

SubsolveResult ConSubsolver::solve(const Vec& x_k, const Vec& x_prev, const Vec& xi_k,
                                   double gamma_k, double sigma, Criterion criterion,
                                   bool strict) {
  ConDualModel model(p_, gamma_k, x_k, xi_k);

  double rhs_sc2 = 0.0;
  if (criterion == Criterion::SC2) {
    Vec dx(x_k.size());
    kernels::lincomb(1.0, x_k.data(), -1.0, x_prev.data(), dx.data(), x_k.size());
    Vec adx;
    gemv_n(p_.A(), dx, adx);
    rhs_sc2 = 0.5 * sigma * gamma_k * (norm2sq(dx) + norm2sq(adx));
  }
  const double eps_gate = rhs_sc2;  // economical gate: defer work until ||grad|| <= eps_k

  SubsolveResult out;
  int constructions = 0;
  auto accept = [&](const Vec& z, const Vec& g, int /*t*/, bool stagnated) -> bool {
    const double gnorm = norm2(g);
    const bool machine_exact =
        gnorm <= exact_tol_ || (stagnated && sigma == 0.0 && gnorm <= stall_tol_);
    if (sigma == 0.0) {
      if (!machine_exact) return false;
    } else if (!machine_exact && !stagnated && criterion == Criterion::SC2 &&
               gnorm > eps_gate) {
      return false;
    }
    ConDualState st;
    model.eval(z, st);
    ConCertificateParts parts = build_certificate(p_, model, st);
    ++constructions;

    Vec diff(parts.w_tilde.size());
    kernels::lincomb(1.0, parts.w_tilde.data(), -1.0, x_k.data(), diff.data(), diff.size());
    Vec adiff;
    gemv_n(p_.A(), diff, adiff);
    const double delta_k = parts.delta1 + parts.delta2;
    const double lhs = norm2sq(parts.Delta) + std::abs(dot(parts.Delta, diff)) + delta_k;
    const double rhs = criterion == Criterion::SC1
                           ? 0.5 * sigma * gamma_k * (norm2sq(diff) + norm2sq(adiff))
                           : rhs_sc2;
    bool ok;
    if (sigma == 0.0) {
      ok = true;  // exact mode: the dual residual gate above is the test
    } else {
      // once the dual is solved to machine attainability, a certificate
      // missing the criterion by less than the descent-slack budget is
      // accepted as exact (covers degenerate zero right-hand sides)
      const bool at_floor = stagnated || machine_exact;
      ok = lhs <= rhs || (at_floor && lhs <= rhs + kEscapeBudget);
      if (ok && strict && lhs <= rhs) ok = norm2(parts.Delta) <= rhs;
    }
    if (ok) {
      out.cert.x_next = parts.w_tilde;
      out.cert.delta_vec = parts.Delta;
      out.cert.delta_scalar = delta_k;
      out.cert.lhs = lhs;
      out.cert.rhs = rhs;
      out.cert.exact_escape = sigma > 0.0 && lhs > rhs;
      last_parts_ = std::move(parts);
    }
    return ok;
  };

  SsnResult res = ssn_solve(model, z_warm_, accept, ssn_);
  z_warm_ = std::move(res.z);
  out.inner_iters = res.newton_steps;
  out.cert_constructions = constructions;
  out.took_steps = res.newton_steps > 0;
  out.final_step_unit = res.final_step_unit;
  return out;
}

}  // namespace bdc
