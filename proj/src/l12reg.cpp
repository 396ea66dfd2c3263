#include "bdc/l12reg.hpp"

#include <cmath>

namespace bdc {

namespace {
// stagnation escapes may miss the criterion by at most half the 1e-9
// descent-monitor slack
constexpr double kEscapeBudget = 5e-10;
}  // namespace

RegProblem::RegProblem(ProblemInstance instance, double lambda)
    : inst_(std::move(instance)), lambda_(lambda), kernel_(KernelModel::quadratic(inst_.n())) {
  if (!(lambda > 0.0)) throw std::invalid_argument("l12reg: lambda must be > 0");
  for (std::size_t j = 0; j < inst_.n(); ++j) {
    if (kernels::nrm2sq(inst_.A.col(j), inst_.m()) == 0.0)
      throw std::invalid_argument("l12reg: A has a zero column (index " + std::to_string(j) + ")");
  }
}

double RegProblem::objective(const Vec& x) const {
  require_dim(x.size() == inst_.n(), "objective_reg");
  Vec r;
  gemv_n(inst_.A, x, r);
  kernels::axpy(-1.0, inst_.b.data(), r.data(), r.size());
  return 0.5 * norm2sq(r) + lambda_ * (norm1(x) - norm2(x));
}

double objective_reg(const RegProblem& p, const Vec& x) { return p.objective(x); }

RegDualModel::RegDualModel(const Mat& A, const Vec& b, double lambda, double gamma, const Vec& x_k,
                           const Vec& xi_k)
    : A_(A), b_(b), lambda_(lambda), gamma_(gamma) {
  require_dim(x_k.size() == A.cols && xi_k.size() == A.cols && b.size() == A.rows,
              "reg dual model");
  if (!(gamma > 0.0)) throw std::invalid_argument("reg dual: gamma must be > 0");
  base_v_.resize(A.cols);
  kernels::lincomb(1.0, x_k.data(), 1.0 / gamma, xi_k.data(), base_v_.data(), A.cols);
  xk_nrmsq_ = norm2sq(x_k);
}

Vec RegDualModel::v_of(const Vec& z) const {
  Vec atz;
  gemv_t(A_, z, atz);
  Vec v(A_.cols);
  kernels::lincomb(1.0, base_v_.data(), -1.0 / gamma_, atz.data(), v.data(), A_.cols);
  return v;
}

double RegDualModel::value(const Vec& z) const {
  const Vec v = v_of(z);
  Vec w(v.size());
  kernels::soft_threshold(v.data(), lambda_ / gamma_, w.data(), v.size());
  Vec wv(v.size());
  kernels::lincomb(1.0, w.data(), -1.0, v.data(), wv.data(), v.size());
  return 0.5 * norm2sq(z) + dot(z, b_) - lambda_ * norm1(w) - 0.5 * gamma_ * norm2sq(wv) +
         0.5 * gamma_ * norm2sq(v) - 0.5 * gamma_ * xk_nrmsq_;
}

void RegDualModel::eval(const Vec& z, RegDualState& st) const {
  st.z = z;
  st.v = v_of(z);
  st.w.resize(st.v.size());
  kernels::soft_threshold(st.v.data(), lambda_ / gamma_, st.w.data(), st.v.size());
  gemv_n(A_, st.w, st.e);
  kernels::scal(-1.0, st.e.data(), st.e.data(), st.e.size());
  kernels::axpy(1.0, z.data(), st.e.data(), st.e.size());
  kernels::axpy(1.0, b_.data(), st.e.data(), st.e.size());
}

void RegDualModel::gradient(const Vec& z, Vec& g) const {
  const Vec v = v_of(z);
  Vec w(v.size());
  kernels::soft_threshold(v.data(), lambda_ / gamma_, w.data(), v.size());
  gemv_n(A_, w, g);
  kernels::scal(-1.0, g.data(), g.data(), g.size());
  kernels::axpy(1.0, z.data(), g.data(), g.size());
  kernels::axpy(1.0, b_.data(), g.data(), g.size());
}

void RegDualModel::jacobian(const Vec& z, Mat& H) const {
  const std::size_t m = A_.rows;
  const Vec v = v_of(z);
  const DiagMask mask = clarke_mask_l1(v, lambda_ / gamma_);
  H = Mat(m, m);
  for (std::size_t i = 0; i < m; ++i) H(i, i) = 1.0;
  const double c = 1.0 / gamma_;
  for (std::size_t j : mask.active_indices())
    kernels::rank1_update(H.data.data(), m, A_.col(j), c, m);
}

double dual_value_reg(const RegProblem& p, const Vec& x_k, const Vec& xi_k, double gamma_k,
                      const Vec& z) {
  return RegDualModel(p.A(), p.b(), p.lambda(), gamma_k, x_k, xi_k).value(z);
}

Vec dual_grad_reg(const RegProblem& p, const Vec& x_k, const Vec& xi_k, double gamma_k,
                  const Vec& z) {
  Vec g;
  RegDualModel(p.A(), p.b(), p.lambda(), gamma_k, x_k, xi_k).gradient(z, g);
  return g;
}

Mat reg_jacobian_element(const RegProblem& p, const Vec& x_k, const Vec& xi_k, double gamma_k,
                         const Vec& z) {
  Mat H;
  RegDualModel(p.A(), p.b(), p.lambda(), gamma_k, x_k, xi_k).jacobian(z, H);
  return H;
}

RegSubsolver::RegSubsolver(const RegProblem& p, SsnParams ssn)
    : p_(p), ssn_(ssn), z_warm_(p.instance().m(), 0.0) {
  exact_tol_ = 1e-12 * (1.0 + norm2(p.b()));
  stall_tol_ = 1e-9 * (1.0 + norm2(p.b()));
}

SubsolveResult RegSubsolver::solve(const Vec& x_k, const Vec& x_prev, const Vec& xi_k,
                                   double gamma_k, double sigma, Criterion criterion,
                                   bool strict) {
  RegDualModel model(p_.A(), p_.b(), p_.lambda(), gamma_k, x_k, xi_k);
  const double nu = p_.lambda() / gamma_k;

  double rhs_sc2 = 0.0;
  if (criterion == Criterion::SC2) {
    Vec dx(x_k.size());
    kernels::lincomb(1.0, x_k.data(), -1.0, x_prev.data(), dx.data(), x_k.size());
    rhs_sc2 = 0.5 * sigma * gamma_k * norm2sq(dx);
  }

  SubsolveResult out;
  int checks = 0;
  auto accept = [&](const Vec& z, const Vec& g, int /*t*/, bool stagnated) -> bool {
    ++checks;
    const Vec v = model.v_of(z);
    Vec w(v.size());
    kernels::soft_threshold(v.data(), nu, w.data(), v.size());
    Vec delta;
    gemv_t(p_.A(), g, delta);
    kernels::scal(-1.0, delta.data(), delta.data(), delta.size());
    Vec diff(w.size());
    kernels::lincomb(1.0, w.data(), -1.0, x_k.data(), diff.data(), w.size());
    const double lhs = norm2sq(delta) + std::abs(dot(delta, diff));
    const double rhs =
        criterion == Criterion::SC1 ? 0.5 * sigma * gamma_k * norm2sq(diff) : rhs_sc2;
    bool ok;
    if (sigma == 0.0) {
      ok = norm2(g) <= exact_tol_ || (stagnated && norm2(g) <= stall_tol_);
    } else {
      // once the dual is solved to machine attainability (tiny gradient or
      // provable stagnation), a certificate missing the criterion by less
      // than the descent-slack budget is accepted as exact; this covers the
      // degenerate zero right-hand sides (x_k optimal, x_k = x_{k-1})
      const bool at_floor = stagnated || norm2(g) <= exact_tol_;
      ok = lhs <= rhs || (at_floor && lhs <= rhs + kEscapeBudget);
      // rhs equals sigma*gamma_k*D_phi(reference pair) for the quadratic kernel
      if (ok && strict && lhs <= rhs) ok = norm2(delta) <= rhs;
    }
    if (ok) {
      out.cert.x_next = std::move(w);
      out.cert.delta_vec = std::move(delta);
      out.cert.delta_scalar = 0.0;
      out.cert.lhs = lhs;
      out.cert.rhs = rhs;
      out.cert.exact_escape = sigma > 0.0 && lhs > rhs;
    }
    return ok;
  };

  SsnResult res = ssn_solve(model, z_warm_, accept, ssn_);
  z_warm_ = std::move(res.z);
  out.inner_iters = res.newton_steps;
  out.cert_constructions = checks;
  out.took_steps = res.newton_steps > 0;
  out.final_step_unit = res.final_step_unit;
  return out;
}

}  // namespace bdc
