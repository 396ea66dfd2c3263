#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bdc/bregman.hpp"
#include "bdc/linalg.hpp"

namespace bdc {

struct NonFiniteObjective : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Criterion { SC1, SC2 };

enum class SolveStatus { ConvergedRelChange, ConvergedObjChange, MaxIter };

const char* to_string(SolveStatus s);
const char* to_string(Criterion c);

struct SolverParams {
  std::function<double(int)> gamma_schedule;  // defaults to max(1/sqrt(k+1), 0.1)
  double gamma_min = 0.1;
  double gamma_max = 1.0;
  double L = 0.0;
  double sigma = 0.9;
  Criterion criterion = Criterion::SC1;
  int max_outer = 30000;
  double tol_x = 1e-7;
  double tol_f_pair = 1e-7;   // objective part of the paired relative-change rule
  double tol_f_only = 1e-10;  // objective-change-only rule
  int consecutive_required = 3;
  // Additionally require ||Delta|| <= sigma*gamma_k*D_phi(reference pair) at
  // acceptance, which makes the errors summable. Off by default.
  bool strict_summable = false;

  double gamma(int k) const;
  void validate() const;  // throws std::invalid_argument on a bad configuration
};

// The triple (x+, Delta, delta) proving the inexactness condition for one
// subproblem solve, with the two sides of the accepted criterion. exact_escape
// records that the solve was accepted as exact at the attainable
// floating-point accuracy of the dual (the relative inequality is vacuous in
// exact arithmetic there but its right-hand side can fall below double
// precision near outer convergence); lhs/rhs still hold the measured values.
struct ErrorCertificate {
  Vec x_next;
  Vec delta_vec;
  double delta_scalar = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool exact_escape = false;
};

struct IterRecord {
  int k = 0;
  double objective = 0.0;  // F(x^k) before the step
  double d_fwd = 0.0;      // D_phi(x^{k+1}, x^k)
  double d_bwd = 0.0;      // D_phi(x^k, x^{k+1})
  double sc_lhs = 0.0;
  double sc_rhs = 0.0;
  int inner_iters = 0;
  double elapsed = 0.0;   // seconds since solve start, at the end of this iteration
  double stat_res = 0.0;  // ||Delta^{k-1}|| + gamma_{k-1}||grad phi gap|| + ||xi gap||
};

struct InvariantCounters {
  int sc_descent_violations = 0;  // SC1 descent or SC2 merit monotonicity
  int rate_bound_violations = 0;
  int cert_recheck_failures = 0;
  double max_feas_violation = 0.0;  // filled by applications with constraints
};

struct SolveReport {
  SolveStatus status = SolveStatus::MaxIter;
  Vec x_final;
  double f_initial = 0.0;
  double f_final = 0.0;
  std::vector<IterRecord> trajectory;
  int outer_iters = 0;
  long long inner_iters_total = 0;
  long long cert_constructions = 0;
  int solves_with_steps = 0;
  int solves_final_unit_step = 0;
  double wall_time = 0.0;
  InvariantCounters invariants;

  double unit_step_fraction() const {
    return solves_with_steps > 0
               ? static_cast<double>(solves_final_unit_step) / solves_with_steps
               : 1.0;
  }
};

struct SubsolveResult {
  ErrorCertificate cert;
  int inner_iters = 0;
  int cert_constructions = 0;
  bool took_steps = false;
  bool final_step_unit = false;
};

// What the outer loop needs from an application.
class DcProblem {
 public:
  virtual ~DcProblem() = default;
  virtual const KernelModel& kernel() const = 0;
  virtual double objective(const Vec& x) const = 0;
  virtual double p2_weight() const = 0;
  // Hook invoked on every accepted iterate (constraint tracking).
  virtual void on_accept(const Vec& x_next, InvariantCounters& counters) const {
    (void)x_next;
    (void)counters;
  }
};

class SubproblemSolver {
 public:
  virtual ~SubproblemSolver() = default;
  virtual SubsolveResult solve(const Vec& x_k, const Vec& x_prev, const Vec& xi_k, double gamma_k,
                               double sigma, Criterion criterion, bool strict) = 0;
};

// weight * x/||x|| away from zero; the zero vector at x = 0.
Vec subgrad_p2_norm(const Vec& x, double weight);

// Recomputes the accepted criterion from a stored certificate, independent of
// the subsolver that produced it.
bool check_criterion(const ErrorCertificate& cert, const KernelModel& kernel, Criterion criterion,
                     double sigma, double gamma_k, const Vec& x_k, const Vec& x_prev,
                     double slack = 1e-9);

// Algorithm driver: subgradient step on P2, delegated inexact subproblem
// solve, certificate recheck, invariant monitoring and termination. Under SC2
// the first outer iteration is verified under SC1, so x^{-1} is never needed.
SolveReport run_ibpdca(const DcProblem& problem, SubproblemSolver& subsolver,
                       const SolverParams& params, const Vec& x0);

}  // namespace bdc
