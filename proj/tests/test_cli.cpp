#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bdc/datagen_io.hpp"
#include "cli.hpp"
#include "doctest.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string tmp_dir() {
  const auto dir = fs::temp_directory_path() / "bdc_cli_test";
  fs::create_directories(dir);
  return dir.string();
}

int run_cli(std::vector<std::string> args) {
  std::vector<char*> argv;
  args.insert(args.begin(), "bdc");
  for (auto& a : args) argv.push_back(a.data());
  return bdc::cli::main_entry(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// time-dependent fields stripped for determinism comparisons
json scrub(json j) {
  j.erase("time");
  j.erase("t0");
  for (auto& row : j.at("trajectory")) row[7] = 0.0;
  return j;
}

}  // namespace

TEST_CASE("gen: writes a loadable instance, identical across reruns") {
  const std::string dir = tmp_dir();
  const std::string f1 = dir + "/a.bdc", f2 = dir + "/b.bdc";
  CHECK(run_cli({"gen", "--m", "12", "--n", "40", "--s", "4", "--seed", "5", "--out", f1}) == 0);
  CHECK(run_cli({"gen", "--m", "12", "--n", "40", "--s", "4", "--seed", "5", "--out", f2}) == 0);
  auto inst = bdc::load_instance(f1);
  CHECK(inst.m() == 12);
  CHECK(inst.n() == 40);
  CHECK(inst.s == 4);
  CHECK(slurp(f1) == slurp(f2));
}

TEST_CASE("gen: zero sparsity is a usage error") {
  CHECK(run_cli({"gen", "--m", "5", "--n", "10", "--s", "0", "--seed", "1", "--out",
                 tmp_dir() + "/x.bdc"}) == 1);
}

TEST_CASE("solve: deterministic trajectory across reruns") {
  const std::string dir = tmp_dir();
  const std::string inst = dir + "/det.bdc";
  REQUIRE(run_cli({"gen", "--m", "15", "--n", "60", "--s", "5", "--seed", "3", "--out", inst}) ==
          0);
  bdc::cli::SolveOptions so;
  so.instance_path = inst;
  so.lambda = 0.1;
  json a = bdc::cli::run_solve(so);
  json b = bdc::cli::run_solve(so);
  CHECK(scrub(a) == scrub(b));
  CHECK(a.at("report_version") == 1);
  CHECK(a.at("invariants").at("sc_descent_violations") == 0);
}

TEST_CASE("solve: sc2 on l12con reports the certificate-construction gate") {
  const std::string dir = tmp_dir();
  const std::string inst = dir + "/con.bdc";
  REQUIRE(run_cli({"gen", "--m", "15", "--n", "60", "--s", "5", "--seed", "4", "--out", inst}) ==
          0);
  bdc::cli::SolveOptions so;
  so.instance_path = inst;
  so.problem = "l12con";
  so.criterion = "sc2";
  so.nf = 1.5;
  json rep = bdc::cli::run_solve(so);
  CHECK(rep.at("cert_constructions").get<long long>() <
        rep.at("ssn_iters").get<long long>() + rep.at("outer_iters").get<long long>());
  CHECK(rep.at("feas").get<double>() <= 1e-9);
  CHECK(rep.contains("rec"));
  CHECK(rep.at("invariants").at("max_feas_violation").get<double>() <= 1e-9);
}

TEST_CASE("solve: trajectory CSV has the frozen header") {
  const std::string dir = tmp_dir();
  const std::string inst = dir + "/traj.bdc";
  REQUIRE(run_cli({"gen", "--m", "10", "--n", "30", "--s", "3", "--seed", "6", "--out", inst}) ==
          0);
  const std::string out = dir + "/rep.json", traj = dir + "/traj.csv";
  CHECK(run_cli({"solve", "--instance", inst, "--lambda", "0.5", "--out", out, "--traj",
                 traj}) == 0);
  std::ifstream is(traj);
  std::string header;
  std::getline(is, header);
  CHECK(header == "k,obj,d_fwd,d_bwd,sc_lhs,sc_rhs,inner,elapsed,stat_res");
}

TEST_CASE("bench: frozen CSV contract and determinism modulo time columns") {
  const std::string dir = tmp_dir();
  const std::string cfg_path = dir + "/cfg.json";
  {
    std::ofstream os(cfg_path);
    os << R"({"problem":"l12reg","sizes":[[20,100,5]],"lambdas":[0.5],)"
       << R"("methods":["ibpdca-sc1","ibpdca-sc2"],"trials":2,"base_seed":9})";
  }
  json cfg_json = json::parse(slurp(cfg_path));
  auto cfg = bdc::cli::BenchConfig::from_json(cfg_json);
  const std::string csv1 = bdc::cli::run_bench(cfg, dir + "/out1");
  const std::string csv2 = bdc::cli::run_bench(cfg, dir + "/out2");

  std::istringstream is(csv1);
  std::string header;
  std::getline(is, header);
  CHECK(header == "size,method,obj,feas,rec,outer_iter,ssn_iter,time,t0");
  int rows = 0;
  std::string line;
  std::vector<std::string> methods;
  while (std::getline(is, line)) {
    ++rows;
    const auto c1 = line.find(',');
    methods.push_back(line.substr(c1 + 1, line.find(',', c1 + 1) - c1 - 1));
  }
  CHECK(rows == 2);  // one row per method per cell
  CHECK(methods == std::vector<std::string>{"ibpdca-sc1", "ibpdca-sc2"});

  // identical modulo the two time columns
  auto strip_time = [](const std::string& csv) {
    std::istringstream ss(csv);
    std::string out, ln;
    while (std::getline(ss, ln)) {
      std::size_t pos = 0;
      for (int c = 0; c < 7 && pos != std::string::npos; ++c) pos = ln.find(',', pos + 1);
      out += ln.substr(0, pos) + "\n";
    }
    return out;
  };
  CHECK(strip_time(csv1) == strip_time(csv2));
  CHECK(fs::exists(dir + "/out1/bench.csv"));
  CHECK(fs::exists(dir + "/out1/run_20x100x5_lam0.5_ibpdca-sc1_t0.json"));

  // fanning trials out over workers must not change anything but wall times
  const std::string csv3 = bdc::cli::run_bench(cfg, dir + "/out3", 2);
  CHECK(strip_time(csv1) == strip_time(csv3));
}

TEST_CASE("plot: normalization contract") {
  const std::string dir = tmp_dir();
  const std::string inst = dir + "/plot.bdc";
  REQUIRE(run_cli({"gen", "--m", "12", "--n", "50", "--s", "4", "--seed", "8", "--out", inst}) ==
          0);
  bdc::cli::SolveOptions so;
  so.instance_path = inst;
  so.lambda = 0.2;
  json r1 = bdc::cli::run_solve(so);
  so.criterion = "sc2";
  json r2 = bdc::cli::run_solve(so);
  const std::string p1 = dir + "/r1.json", p2 = dir + "/r2.json";
  bdc::cli::write_report(r1, p1);
  bdc::cli::write_report(r2, p2);

  bdc::cli::make_plot({p1}, dir + "/single");
  CHECK(fs::exists(dir + "/single.svg"));
  std::ifstream cs(dir + "/single.csv");
  std::string header, first;
  std::getline(cs, header);
  CHECK(header == "report,k,time,norm_obj");
  std::getline(cs, first);
  // first point of a single-report plot is normalized to 1
  CHECK(first.substr(first.rfind(',') + 1) == "1");
  // the last value of the minimizing report collapses to the floor
  std::string last, line;
  while (std::getline(cs, line))
    if (!line.empty()) last = line;
  const double final_norm = std::stod(last.substr(last.rfind(',') + 1));
  CHECK(final_norm <= 1e-10);

  bdc::cli::make_plot({p1, p2}, dir + "/both");
  CHECK(fs::exists(dir + "/both.svg"));
  CHECK(fs::exists(dir + "/both.csv"));

  CHECK_THROWS_AS(bdc::cli::make_plot({}, dir + "/none"), std::invalid_argument);
}

TEST_CASE("exit codes: usage error is 1") {
  CHECK(run_cli({"solve", "--problem", "nosuch"}) == 1);
  CHECK(run_cli({"definitely-not-a-subcommand"}) == 1);
}
