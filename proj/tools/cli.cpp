#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "bdc/baselines.hpp"
#include "bdc/datagen_io.hpp"
#include "bdc/l12con.hpp"
#include "bdc/l12reg.hpp"

namespace bdc::cli {

namespace {

using nlohmann::json;

double now_seconds(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

json trajectory_json(const SolveReport& rep) {
  json rows = json::array();
  for (const auto& r : rep.trajectory) {
    rows.push_back({r.k, r.objective, r.d_fwd, r.d_bwd, r.sc_lhs, r.sc_rhs, r.inner_iters,
                    r.elapsed, r.stat_res});
  }
  return rows;
}

json base_report(const SolveReport& rep, bool keep_traj) {
  json j;
  j["report_version"] = 1;
  j["status"] = to_string(rep.status);
  j["objective"] = rep.f_final;
  j["objective_initial"] = rep.f_initial;
  j["outer_iters"] = rep.outer_iters;
  j["ssn_iters"] = rep.inner_iters_total;
  j["cert_constructions"] = rep.cert_constructions;
  j["unit_step_fraction"] = rep.unit_step_fraction();
  j["time"] = rep.wall_time;
  j["invariants"] = {{"sc_descent_violations", rep.invariants.sc_descent_violations},
                     {"rate_bound_violations", rep.invariants.rate_bound_violations},
                     {"cert_recheck_failures", rep.invariants.cert_recheck_failures},
                     {"max_feas_violation", rep.invariants.max_feas_violation}};
  j["trajectory_columns"] =
      json::array({"k", "obj", "d_fwd", "d_bwd", "sc_lhs", "sc_rhs", "inner", "elapsed",
                   "stat_res"});
  j["trajectory"] = keep_traj ? trajectory_json(rep) : json::array();
  return j;
}

double recovery_error(const ProblemInstance& inst, const Vec& x) {
  Vec d(x.size());
  kernels::lincomb(1.0, x.data(), -1.0, inst.x_orig->data(), d.data(), x.size());
  return norm2(d) / (1.0 + norm2(*inst.x_orig));
}

Criterion parse_criterion(const std::string& s) {
  if (s == "sc1") return Criterion::SC1;
  if (s == "sc2") return Criterion::SC2;
  throw std::invalid_argument("criterion must be sc1 or sc2");
}

double default_sigma(Criterion c) { return c == Criterion::SC1 ? 0.9 : 0.09; }

ProblemInstance load_from_options(const SolveOptions& o) {
  if (!o.instance_path.empty()) return load_instance(o.instance_path);
  if (!o.csv_a.empty() && !o.csv_b.empty()) return load_csv_matrix(o.csv_a, o.csv_b);
  throw std::invalid_argument("provide --instance or both --csv-a and --csv-b");
}

double resolve_kappa(const SolveOptions& o, const ProblemInstance& inst) {
  if (o.kappa > 0.0) return o.kappa;
  if (o.nf > 0.0) {
    if (!inst.x_orig)
      throw std::invalid_argument("--nf needs a generated instance with x_orig; use --kappa-c");
    return o.nf * inst.noise_norm();
  }
  if (o.kappa_c > 0.0) return o.kappa_c * norm2(inst.b);
  throw std::invalid_argument("l12con needs one of --kappa, --nf, --kappa-c");
}

struct Initialized {
  Vec x0;
  double t0 = 0.0;
};

Initialized init_reg(const RegProblem& p, int fista_iters) {
  const auto t0 = std::chrono::steady_clock::now();
  Initialized out;
  out.x0 = fista_l1ls(p.A(), p.b(), p.lambda(), fista_iters).x;
  out.t0 = now_seconds(t0);
  return out;
}

// FISTA on the l1 problem with lambda0 = 0.01*||A^T b||_inf, box clamp, then
// the same retraction used inside the solver.
Initialized init_con(const ConProblem& p, int fista_iters) {
  const auto t0 = std::chrono::steady_clock::now();
  Initialized out;
  Vec atb;
  gemv_t(p.A(), p.b(), atb);
  const double lam0 = std::max(0.01 * norm_inf(atb), 1e-12);
  Vec x = fista_l1ls(p.A(), p.b(), lam0, fista_iters).x;
  Vec clamped(x.size());
  kernels::soft_threshold_clamp(x.data(), 0.0, p.M(), clamped.data(), x.size());
  out.x0 = retract(p, clamped).w_tilde;
  out.t0 = now_seconds(t0);
  return out;
}

SolverParams make_params(Criterion crit, double sigma, int max_iter, bool strict) {
  SolverParams P;
  P.criterion = crit;
  P.sigma = sigma >= 0.0 ? sigma : default_sigma(crit);
  P.max_outer = max_iter;
  P.strict_summable = strict;
  return P;
}

}  // namespace

json run_solve(const SolveOptions& opts) {
  ProblemInstance inst = load_from_options(opts);
  const int default_max = opts.problem == "l12con" ? 20000 : 30000;
  const int max_iter = opts.max_iter > 0 ? opts.max_iter : default_max;

  json j;
  j["problem"] = opts.problem;
  j["method"] = opts.method;
  j["m"] = inst.m();
  j["n"] = inst.n();
  j["seed"] = inst.seed;

  if (opts.problem == "l12reg") {
    RegProblem prob(std::move(inst), opts.lambda);
    const Initialized init = init_reg(prob, opts.fista_iters);
    SolveReport rep;
    if (opts.method == "pdcae") {
      PdcaeParams pp;
      pp.max_iter = max_iter;
      rep = pdcae_solve(prob, pp, init.x0);
    } else if (opts.method == "ibpdca") {
      const Criterion crit = parse_criterion(opts.criterion);
      SolverParams P = make_params(crit, opts.sigma, max_iter, opts.strict);
      RegSubsolver sub(prob, default_ssn_params(prob.instance().m()));
      rep = run_ibpdca(prob, sub, P, init.x0);
    } else {
      throw std::invalid_argument("unknown method: " + opts.method);
    }
    json out = base_report(rep, opts.keep_trajectory);
    out.update(j);
    out["criterion"] = opts.method == "ibpdca" ? json(opts.criterion) : json(nullptr);
    out["lambda"] = opts.lambda;
    out["feas"] = nullptr;
    out["rec"] = prob.instance().x_orig ? json(recovery_error(prob.instance(), rep.x_final))
                                        : json(nullptr);
    out["t0"] = init.t0;
    return out;
  }

  if (opts.problem == "l12con") {
    if (opts.method != "ibpdca")
      throw std::invalid_argument("l12con supports only the ibpdca method");
    const double kappa = resolve_kappa(opts, inst);
    ConProblem prob(std::move(inst), opts.mu, kappa);
    const Initialized init = init_con(prob, opts.fista_iters);
    const Criterion crit = parse_criterion(opts.criterion);
    SolverParams P = make_params(crit, opts.sigma, max_iter, opts.strict);
    ConSubsolver sub(prob, default_ssn_params(prob.instance().m()));
    SolveReport rep = run_ibpdca(prob, sub, P, init.x0);

    json out = base_report(rep, opts.keep_trajectory);
    out.update(j);
    out["criterion"] = opts.criterion;
    out["mu"] = opts.mu;
    out["kappa"] = kappa;
    out["M"] = prob.M();
    Vec r;
    gemv_n(prob.A(), rep.x_final, r);
    kernels::axpy(-1.0, prob.b().data(), r.data(), r.size());
    out["feas"] = norm2(r) - kappa;
    out["rec"] = prob.instance().x_orig ? json(recovery_error(prob.instance(), rep.x_final))
                                        : json(nullptr);
    out["t0"] = init.t0;
    return out;
  }

  throw std::invalid_argument("unknown problem: " + opts.problem);
}

void write_report(const json& report, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for write: " + path);
  os << report.dump(2) << '\n';
}

void write_trajectory_csv(const json& report, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for write: " + path);
  os << "k,obj,d_fwd,d_bwd,sc_lhs,sc_rhs,inner,elapsed,stat_res\n";
  for (const auto& row : report.at("trajectory")) {
    os << row[0].get<long long>();
    for (int c = 1; c <= 5; ++c) os << ',' << fmt("%.17g", row[c].get<double>());
    os << ',' << row[6].get<long long>();
    os << ',' << fmt("%.6g", row[7].get<double>());
    os << ',' << fmt("%.17g", row[8].get<double>()) << '\n';
  }
}

BenchConfig BenchConfig::from_json(const json& j) {
  BenchConfig cfg;
  cfg.problem = j.value("problem", "l12reg");
  for (const auto& s : j.at("sizes"))
    cfg.sizes.push_back({s.at(0).get<std::size_t>(), s.at(1).get<std::size_t>(),
                         s.at(2).get<std::size_t>()});
  if (j.contains("lambdas")) cfg.lambdas = j.at("lambdas").get<std::vector<double>>();
  cfg.mu = j.value("mu", 0.95);
  if (j.contains("nf")) {
    if (j.at("nf").is_array())
      cfg.nfs = j.at("nf").get<std::vector<double>>();
    else
      cfg.nfs = {j.at("nf").get<double>()};
  }
  cfg.methods = j.value("methods", std::vector<std::string>{"ibpdca-sc1", "ibpdca-sc2"});
  cfg.trials = j.value("trials", 20);
  cfg.base_seed = j.value("base_seed", std::uint64_t{1});
  cfg.max_iter = j.value("max_iter", 0);
  cfg.keep_trajectory = j.value("keep_trajectory", false);
  if (cfg.sizes.empty()) throw std::invalid_argument("bench config: sizes must be non-empty");
  if (cfg.trials < 1) throw std::invalid_argument("bench config: trials must be >= 1");
  if (cfg.problem == "l12reg" && cfg.lambdas.empty())
    throw std::invalid_argument("bench config: l12reg needs lambdas");
  if (cfg.problem == "l12con" && cfg.nfs.empty())
    throw std::invalid_argument("bench config: l12con needs nf");
  return cfg;
}

namespace {

struct TrialOutcome {
  bool failed = false;
  std::string error;
  double obj = 0.0, feas = 0.0, rec = 0.0, time = 0.0, t0 = 0.0;
  double outer = 0.0, ssn = 0.0;
  bool has_rec = false, has_feas = false;
  json report;
};

std::string size_key(const std::array<std::size_t, 3>& s, const std::string& param_name,
                     double param) {
  std::ostringstream os;
  os << s[0] << 'x' << s[1] << 'x' << s[2] << '_' << param_name << fmt("%g", param);
  return os.str();
}

TrialOutcome run_one_trial(const BenchConfig& cfg, const std::array<std::size_t, 3>& size,
                           double param, const std::string& method, std::uint64_t seed,
                           int max_iter) {
  TrialOutcome out;
  try {
    ProblemInstance inst = gen_instance(size[0], size[1], size[2], seed);
    if (cfg.problem == "l12reg") {
      RegProblem prob(std::move(inst), param);
      const Initialized init = init_reg(prob, 200);
      SolveReport rep;
      if (method == "pdcae") {
        PdcaeParams pp;
        pp.max_iter = max_iter;
        rep = pdcae_solve(prob, pp, init.x0);
      } else {
        const Criterion crit = parse_criterion(method.substr(method.size() - 3));
        SolverParams P = make_params(crit, -1.0, max_iter, false);
        RegSubsolver sub(prob, default_ssn_params(prob.instance().m()));
        rep = run_ibpdca(prob, sub, P, init.x0);
      }
      out.obj = rep.f_final;
      out.outer = rep.outer_iters;
      out.ssn = static_cast<double>(rep.inner_iters_total);
      out.time = rep.wall_time;
      out.t0 = init.t0;
      out.has_rec = prob.instance().x_orig.has_value();
      if (out.has_rec) out.rec = recovery_error(prob.instance(), rep.x_final);
      out.report = base_report(rep, cfg.keep_trajectory);
      out.report["lambda"] = param;
    } else {
      const double kappa = param * inst.noise_norm();
      ConProblem prob(std::move(inst), cfg.mu, kappa);
      const Initialized init = init_con(prob, 200);
      const Criterion crit = parse_criterion(method.substr(method.size() - 3));
      SolverParams P = make_params(crit, -1.0, max_iter, false);
      ConSubsolver sub(prob, default_ssn_params(prob.instance().m()));
      SolveReport rep = run_ibpdca(prob, sub, P, init.x0);
      out.obj = rep.f_final;
      out.outer = rep.outer_iters;
      out.ssn = static_cast<double>(rep.inner_iters_total);
      out.time = rep.wall_time;
      out.t0 = init.t0;
      out.has_rec = prob.instance().x_orig.has_value();
      if (out.has_rec) out.rec = recovery_error(prob.instance(), rep.x_final);
      out.has_feas = true;
      Vec r;
      gemv_n(prob.A(), rep.x_final, r);
      kernels::axpy(-1.0, prob.b().data(), r.data(), r.size());
      out.feas = norm2(r) - kappa;
      out.report = base_report(rep, cfg.keep_trajectory);
      out.report["nf"] = param;
      out.report["kappa"] = kappa;
    }
    out.report["method"] = method;
    out.report["seed"] = seed;
    out.report["m"] = size[0];
    out.report["n"] = size[1];
    out.report["s"] = size[2];
    out.report["problem"] = cfg.problem;
    out.report["t0"] = out.t0;
    out.report["rec"] = out.has_rec ? json(out.rec) : json(nullptr);
    out.report["feas"] = out.has_feas ? json(out.feas) : json(nullptr);
  } catch (const std::exception& e) {
    out.failed = true;
    out.error = e.what();
  }
  return out;
}

}  // namespace

std::string run_bench(const BenchConfig& cfg, const std::string& out_dir, int threads) {
  namespace fs = std::filesystem;
  std::string dir = out_dir;
  if (const char* env = std::getenv("BDC_OUT_DIR")) dir = env;
  fs::create_directories(dir);

  const std::vector<double>& params = cfg.problem == "l12reg" ? cfg.lambdas : cfg.nfs;
  const std::string param_name = cfg.problem == "l12reg" ? "lam" : "nf";
  const int max_iter =
      cfg.max_iter > 0 ? cfg.max_iter : (cfg.problem == "l12con" ? 20000 : 30000);

  std::ostringstream csv;
  csv << "size,method,obj,feas,rec,outer_iter,ssn_iter,time,t0\n";

  for (std::size_t si = 0; si < cfg.sizes.size(); ++si) {
    for (double param : params) {
      for (const std::string& method : cfg.methods) {
        std::vector<TrialOutcome> outcomes(cfg.trials);
        auto worker = [&](int first, int step) {
          for (int t = first; t < cfg.trials; t += step) {
            const std::uint64_t seed = cfg.base_seed + 1000003ull * si + t;
            outcomes[t] = run_one_trial(cfg, cfg.sizes[si], param, method, seed, max_iter);
          }
        };
        if (threads <= 1) {
          worker(0, 1);
        } else {
          std::vector<std::thread> pool;
          for (int w = 0; w < threads; ++w) pool.emplace_back(worker, w, threads);
          for (auto& th : pool) th.join();
        }

        const std::string key = size_key(cfg.sizes[si], param_name, param);
        double obj = 0, feas = 0, rec = 0, outer = 0, ssn = 0, time = 0, t0 = 0;
        int ok = 0;
        bool any_rec = false, any_feas = false;
        for (int t = 0; t < cfg.trials; ++t) {
          const auto& o = outcomes[t];
          if (o.failed) {
            std::cerr << "bench: trial " << t << " of " << key << '/' << method
                      << " failed: " << o.error << '\n';
            continue;
          }
          obj += o.obj;
          outer += o.outer;
          ssn += o.ssn;
          time += o.time;
          t0 += o.t0;
          if (o.has_rec) {
            rec += o.rec;
            any_rec = true;
          }
          if (o.has_feas) {
            feas += o.feas;
            any_feas = true;
          }
          ++ok;
          std::ostringstream name;
          name << "run_" << key << '_' << method << "_t" << t << ".json";
          write_report(o.report, (fs::path(dir) / name.str()).string());
        }
        csv << key << ',' << method << ',';
        if (ok == 0) {
          csv << "FAILED,,,,,,\n";
          continue;
        }
        const double c = ok;
        csv << fmt("%.6e", obj / c) << ',' << (any_feas ? fmt("%.6e", feas / c) : "") << ','
            << (any_rec ? fmt("%.6e", rec / c) : "") << ',' << fmt("%.1f", outer / c) << ','
            << fmt("%.1f", ssn / c) << ',' << fmt("%.3f", time / c) << ',' << fmt("%.3f", t0 / c)
            << '\n';
      }
    }
  }

  const std::string text = csv.str();
  std::ofstream os(fs::path(dir) / "bench.csv");
  os << text;
  return text;
}

namespace {

struct Curve {
  std::string label;
  std::vector<double> time, obj;
};

Curve curve_from_report(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  json rep = json::parse(is);
  Curve c;
  c.label = std::filesystem::path(path).stem().string();
  const auto& traj = rep.at("trajectory");
  if (traj.empty()) throw std::runtime_error(path + ": report has no trajectory");
  double prev_elapsed = 0.0;
  for (const auto& row : traj) {
    c.time.push_back(prev_elapsed);
    c.obj.push_back(row[1].get<double>());
    prev_elapsed = row[7].get<double>();
  }
  c.time.push_back(prev_elapsed);
  c.obj.push_back(rep.at("objective").get<double>());
  return c;
}

}  // namespace

void make_plot(const std::vector<std::string>& report_paths, const std::string& out_prefix) {
  if (report_paths.empty()) throw std::invalid_argument("plot: no report files given");
  std::vector<Curve> curves;
  for (const auto& p : report_paths) curves.push_back(curve_from_report(p));

  double fmin = curves.front().obj.back();
  for (const auto& c : curves) fmin = std::min(fmin, c.obj.back());

  constexpr double kFloor = 1e-16;
  double tmax = 0.0, ymin = 0.0;
  for (auto& c : curves) {
    const double denom = std::max(c.obj.front() - fmin, kFloor);
    for (auto& v : c.obj) v = std::log10(std::max((v - fmin) / denom, kFloor));
    tmax = std::max(tmax, c.time.back());
    for (double v : c.obj) ymin = std::min(ymin, v);
  }
  tmax = std::max(tmax, 1e-9);
  ymin = std::min(ymin, -1.0);

  {
    std::ofstream cs(out_prefix + ".csv");
    cs << "report,k,time,norm_obj\n";
    for (const auto& c : curves)
      for (std::size_t i = 0; i < c.time.size(); ++i)
        cs << c.label << ',' << i << ',' << fmt("%.6g", c.time[i]) << ','
           << fmt("%.17g", std::pow(10.0, c.obj[i])) << '\n';
  }

  const double W = 960, H = 640, ml = 70, mr = 20, mt = 20, mb = 50;
  auto X = [&](double t) { return ml + (W - ml - mr) * (t / tmax); };
  auto Y = [&](double v) { return mt + (H - mt - mb) * ((0.0 - v) / (0.0 - ymin)); };
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

  std::ofstream os(out_prefix + ".svg");
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
     << "' viewBox='0 0 " << W << ' ' << H << "'>\n";
  os << "<rect width='100%' height='100%' fill='white'/>\n";
  os << "<line x1='" << ml << "' y1='" << H - mb << "' x2='" << W - mr << "' y2='" << H - mb
     << "' stroke='black'/>\n";
  os << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << H - mb
     << "' stroke='black'/>\n";
  for (int g = 0; g >= static_cast<int>(std::floor(ymin)); --g) {
    const double y = Y(g);
    os << "<line x1='" << ml - 4 << "' y1='" << y << "' x2='" << ml << "' y2='" << y
       << "' stroke='black'/>\n";
    os << "<text x='" << ml - 8 << "' y='" << y + 4
       << "' font-size='12' text-anchor='end'>1e" << g << "</text>\n";
  }
  for (int g = 0; g <= 4; ++g) {
    const double t = tmax * g / 4.0;
    os << "<text x='" << X(t) << "' y='" << H - mb + 18
       << "' font-size='12' text-anchor='middle'>" << fmt("%.3g", t) << "</text>\n";
  }
  os << "<text x='" << (W / 2) << "' y='" << H - 12
     << "' font-size='13' text-anchor='middle'>time (s)</text>\n";
  os << "<text x='16' y='" << (H / 2)
     << "' font-size='13' text-anchor='middle' transform='rotate(-90 16 " << (H / 2)
     << ")'>normalized objective</text>\n";
  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    const auto& c = curves[ci];
    os << "<polyline fill='none' stroke='" << palette[ci % 8] << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < c.time.size(); ++i)
      os << X(c.time[i]) << ',' << Y(c.obj[i]) << ' ';
    os << "'/>\n";
    os << "<text x='" << W - mr - 8 << "' y='" << mt + 16 + 16 * ci
       << "' font-size='12' text-anchor='end' fill='" << palette[ci % 8] << "'>" << c.label
       << "</text>\n";
  }
  os << "</svg>\n";
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Bregman proximal DC solver and benchmark harness"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic instance file");
  std::size_t g_m = 0, g_n = 0, g_s = 0;
  std::uint64_t g_seed = 1;
  std::string g_out;
  gen->add_option("--m", g_m, "rows")->required()->check(CLI::PositiveNumber);
  gen->add_option("--n", g_n, "columns")->required()->check(CLI::PositiveNumber);
  gen->add_option("--s", g_s, "sparsity of the planted signal")
      ->required()
      ->check(CLI::PositiveNumber);
  gen->add_option("--seed", g_seed, "generation seed");
  gen->add_option("--out", g_out, "output path")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "run one solver on one instance");
  SolveOptions so;
  solve->add_option("--instance", so.instance_path, "BDC1 instance file");
  solve->add_option("--csv-a", so.csv_a, "matrix A as CSV");
  solve->add_option("--csv-b", so.csv_b, "vector b as CSV (one value per row)");
  solve->add_option("--problem", so.problem)->check(CLI::IsMember({"l12reg", "l12con"}));
  solve->add_option("--method", so.method)->check(CLI::IsMember({"ibpdca", "pdcae"}));
  solve->add_option("--criterion", so.criterion)->check(CLI::IsMember({"sc1", "sc2"}));
  solve->add_option("--sigma", so.sigma, "inexactness tolerance (default 0.9 sc1 / 0.09 sc2)");
  solve->add_option("--lambda", so.lambda, "l12reg regularization weight");
  solve->add_option("--mu", so.mu, "l12con concave weight in [0,1)");
  solve->add_option("--nf", so.nf, "kappa = nf*||noise|| (generated instances)");
  solve->add_option("--kappa-c", so.kappa_c, "kappa = kappa_c*||b||");
  solve->add_option("--kappa", so.kappa, "explicit kappa");
  solve->add_option("--max-iter", so.max_iter, "outer iteration cap");
  solve->add_option("--fista-iters", so.fista_iters, "initializer iterations");
  solve->add_flag("--strict", so.strict, "also require ||Delta|| <= sigma*gamma*D_phi");
  solve->add_option("--out", so.out_json, "report JSON path");
  solve->add_option("--traj", so.traj_csv, "trajectory CSV path");

  // bench
  auto* bench = app.add_subcommand("bench", "run a benchmark grid from a JSON config");
  std::string b_config, b_out = "bench_out";
  int b_threads = 1, b_trials = 0;
  bench->add_option("--config", b_config, "config JSON")->required();
  bench->add_option("--out-dir", b_out, "output directory (env BDC_OUT_DIR overrides)");
  bench->add_option("--threads", b_threads, "worker threads over trials");
  bench->add_option("--trials", b_trials, "override trial count");

  // plot
  auto* plot = app.add_subcommand("plot", "normalized objective vs time from reports");
  std::vector<std::string> p_reports;
  std::string p_out = "plot";
  plot->add_option("reports", p_reports, "report JSON files")->required();
  plot->add_option("--out", p_out, "output prefix (.svg/.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      save_instance(g_out, gen_instance(g_m, g_n, g_s, g_seed));
      std::cout << "wrote " << g_out << '\n';
      return 0;
    }
    if (solve->parsed()) {
      const json report = run_solve(so);
      if (!so.out_json.empty()) write_report(report, so.out_json);
      if (!so.traj_csv.empty()) write_trajectory_csv(report, so.traj_csv);
      std::cout << "status=" << report.at("status").get<std::string>()
                << " objective=" << fmt("%.9e", report.at("objective").get<double>())
                << " outer=" << report.at("outer_iters") << " ssn=" << report.at("ssn_iters")
                << '\n';
      return 0;
    }
    if (bench->parsed()) {
      std::ifstream is(b_config);
      if (!is) throw std::runtime_error("cannot open: " + b_config);
      json cfg_json = json::parse(is);
      BenchConfig cfg = BenchConfig::from_json(cfg_json);
      if (b_trials > 0) cfg.trials = b_trials;
      run_bench(cfg, b_out, b_threads);
      return 0;
    }
    if (plot->parsed()) {
      make_plot(p_reports, p_out);
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace bdc::cli
