#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sepspde/runner.hpp"

using namespace sepspde;
namespace fs = std::filesystem;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_run_config(in, "test.cfg");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("config parsing and validation") {
  const RunConfig cfg = parse("problem: elliptic\nM: 4\nN: 100\nseed: 9\n# comment\n");
  CHECK(cfg.problem == "elliptic");
  CHECK(cfg.dimension == 4);
  CHECK(cfg.samples == 100);
  CHECK(cfg.eps1 == 1e-6);   // per-problem default
  CHECK(cfg.eps2 == 1e-3);
  CHECK(*cfg.probe_x == 0.5);
  CHECK(*cfg.probe_y == 0.5);

  const RunConfig wave = parse("problem: wave\nM: 2\nN: 64\n");
  CHECK(wave.eps1 == 1e-2);
  CHECK(*wave.mesh_nodes == 549);
  CHECK(*wave.probe_t == 1.0);

  CHECK_THROWS_AS(parse("problem: elliptic\neps1: 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("problem: nosuch\n"), ConfigError);
  CHECK_THROWS_AS(parse("M: 4\n"), ConfigError);             // missing problem
  CHECK_THROWS_AS(parse("problem: elliptic\nwhat: 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("problem: elliptic\nM 4\n"), ConfigError);
  CHECK_THROWS_AS(parse("problem: burgers\nM: 0\n"), ConfigError);

  try {
    parse("problem: elliptic\nM: oops\n");
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("test.cfg:2") != std::string::npos);
  }
}

TEST_CASE("oracle seed defaults to an independent stream") {
  const RunConfig cfg = parse("problem: elliptic\nseed: 5\n");
  CHECK(cfg.resolved_oracle_seed() != cfg.seed);
  const RunConfig pinned = parse("problem: elliptic\nseed: 5\noracle_seed: 5\n");
  CHECK(pinned.resolved_oracle_seed() == 5);
}

TEST_CASE("run_benchmark writes the artifact set and is deterministic") {
  RunConfig cfg;
  cfg.problem = "elliptic";
  cfg.dimension = 2;
  cfg.samples = 400;
  cfg.mesh_nodes = 49;
  cfg.seed = 3;
  cfg.eps1 = 1e-8;
  cfg.oracle = true;
  cfg.oracle_samples = 300;
  cfg.kde_points = 101;

  const fs::path dir_a = temp_dir("sepspde_run_a");
  const RunSummary summary = run_benchmark(cfg, dir_a.string());
  CHECK(summary.retained_terms >= 1);
  CHECK(summary.history.front().eps_global == 1.0);
  for (const char* name : {"convergence.csv", "history.csv", "modes.csv", "lambda_samples.csv",
                           "pdf.csv", "oracle_pdf.csv", "oracle_samples.csv", "summary.txt"})
    CHECK(fs::exists(dir_a / name));

  // the probe moments agree with the oracle on this tiny case
  CHECK(std::abs(summary.probe_mean - summary.oracle_mean) <=
        3.0 * summary.oracle_std / std::sqrt(300.0) + 0.01 * summary.oracle_std + 1e-12);
  CHECK(summary.pdf_l1 <= 0.5);

  const fs::path dir_b = temp_dir("sepspde_run_b");
  run_benchmark(cfg, dir_b.string());
  CHECK(slurp(dir_a / "convergence.csv") == slurp(dir_b / "convergence.csv"));
  CHECK(slurp(dir_a / "pdf.csv") == slurp(dir_b / "pdf.csv"));
  CHECK(slurp(dir_a / "lambda_samples.csv") == slurp(dir_b / "lambda_samples.csv"));
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("run_benchmark covers burgers and wave") {
  RunConfig cfg;
  cfg.problem = "burgers";
  cfg.dimension = 10;
  cfg.samples = 300;
  cfg.seed = 4;
  const fs::path dir = temp_dir("sepspde_run_c");
  const RunSummary burgers = run_benchmark(cfg, dir.string());
  CHECK(burgers.retained_terms >= 1);
  CHECK(fs::exists(dir / "modes.csv"));
  fs::remove_all(dir);

  RunConfig wcfg;
  wcfg.problem = "wave";
  wcfg.dimension = 2;
  wcfg.samples = 200;
  wcfg.mesh_nodes = 100;
  wcfg.seed = 5;
  const fs::path wdir = temp_dir("sepspde_run_d");
  const RunSummary wave = run_benchmark(wcfg, wdir.string());
  CHECK(wave.retained_terms >= 1);
  CHECK(fs::exists(wdir / "summary.txt"));
  fs::remove_all(wdir);
}

TEST_CASE("cli exit codes") {
  const char* cli = std::getenv("SEPSPDE_CLI");
  if (cli == nullptr) return;  // only wired up under ctest
  const fs::path dir = temp_dir("sepspde_cli_codes");
  fs::create_directories(dir);

  const auto run = [&](const std::string& config_text, const std::string& extra) {
    const fs::path cfg = dir / "run.cfg";
    std::ofstream(cfg) << config_text;
    std::ostringstream cmd;
    cmd << cli << " --config " << cfg.string() << " --out " << (dir / "out").string() << " "
        << extra << " > " << (dir / "log.txt").string() << " 2>&1";
    const int status = std::system(cmd.str().c_str());
    return WEXITSTATUS(status);
  };

  CHECK(run("problem: elliptic\nM: 2\nN: 256\nmesh_nodes: 49\n", "") == 0);
  CHECK(run("problem: elliptic\neps1: 0\n", "") == 2);
  CHECK(run("problem: nosuch\n", "") == 2);
  CHECK(run("problem: elliptic\nM: 2\nN: 256\nmesh_nodes: 49\neps1: 1e-30\nmax_outer: 2\n", "") ==
        3);
  // partial artifacts from the non-convergent run are retained
  CHECK(fs::exists(dir / "out" / "convergence.csv"));
  fs::remove_all(dir);
}

TEST_CASE("non-convergence keeps partial artifacts") {
  RunConfig cfg;
  cfg.problem = "elliptic";
  cfg.dimension = 2;
  cfg.samples = 200;
  cfg.mesh_nodes = 49;
  cfg.seed = 6;
  cfg.eps1 = 1e-30;  // unreachable
  cfg.max_outer = 2;
  const fs::path dir = temp_dir("sepspde_run_e");
  CHECK_THROWS_AS(run_benchmark(cfg, dir.string()), NonConvergenceError);
  CHECK(fs::exists(dir / "convergence.csv"));
  CHECK(fs::exists(dir / "history.csv"));
  fs::remove_all(dir);
}
