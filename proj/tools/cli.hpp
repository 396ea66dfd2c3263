#pragma once

#include <string>
#include <vector>

#include "bdc/ibpdca.hpp"
#include "json.hpp"

// Command implementations behind the bdc executable. Kept as a library so the
// test suite can drive them directly.

namespace bdc::cli {

struct SolveOptions {
  std::string problem = "l12reg";  // l12reg | l12con
  std::string method = "ibpdca";   // ibpdca | pdcae
  std::string criterion = "sc1";   // sc1 | sc2
  double sigma = -1.0;             // negative: default for the criterion (0.9 / 0.09)
  double lambda = 0.1;
  double mu = 0.95;
  double nf = 0.0;       // kappa = nf * ||b - A x_orig|| (generated instances)
  double kappa_c = 0.0;  // kappa = kappa_c * ||b|| (external data)
  double kappa = 0.0;    // explicit kappa wins over the rules above
  int max_iter = 0;      // 0: 30000 for l12reg, 20000 for l12con
  int fista_iters = 200;
  bool strict = false;
  bool keep_trajectory = true;
  std::string instance_path;
  std::string csv_a, csv_b;
  std::string out_json;
  std::string traj_csv;
};

// Runs one solve end to end (load, initialize, solve) and returns the report.
nlohmann::json run_solve(const SolveOptions& opts);

void write_report(const nlohmann::json& report, const std::string& path);
void write_trajectory_csv(const nlohmann::json& report, const std::string& path);

struct BenchConfig {
  std::string problem = "l12reg";
  std::vector<std::array<std::size_t, 3>> sizes;  // (m, n, s)
  std::vector<double> lambdas;                    // l12reg
  double mu = 0.95;                               // l12con
  std::vector<double> nfs;                        // l12con: kappa = nf*||noise||
  std::vector<std::string> methods;
  int trials = 20;
  std::uint64_t base_seed = 1;
  int max_iter = 0;
  bool keep_trajectory = false;

  static BenchConfig from_json(const nlohmann::json& j);
};

// Runs the benchmark grid; writes <out_dir>/bench.csv plus one JSON per run.
// Returns the CSV text. trials fan out over `threads` workers.
std::string run_bench(const BenchConfig& cfg, const std::string& out_dir, int threads = 1);

// Normalized-objective-vs-time plot: writes <out_prefix>.svg and
// <out_prefix>.csv from one or more report files.
void make_plot(const std::vector<std::string>& report_paths, const std::string& out_prefix);

// Full argv entry point; returns the process exit code
// (0 ok, 1 usage/config error, 2 numerical failure).
int main_entry(int argc, char** argv);

}  // namespace bdc::cli
