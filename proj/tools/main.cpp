#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "sepspde/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNonConvergence = 3;
constexpr int kExitInternal = 4;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sample-based separated-representation solver for stochastic PDEs"};
  std::string config_path;
  std::string out_dir = "out";
  bool oracle = false;
  int oracle_samples = -1;
  int threads = -1;
  app.add_option("--config", config_path, "run configuration file")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--oracle", oracle, "run the Monte Carlo reference solver");
  app.add_option("--oracle-samples", oracle_samples, "Monte Carlo reference sample count");
  app.add_option("--threads", threads, "worker threads for per-sample loops");
  CLI11_PARSE(app, argc, argv);

  sepspde::RunConfig config;
  try {
    config = sepspde::load_run_config(config_path);
    if (oracle) config.oracle = true;
    if (oracle_samples > 0) config.oracle_samples = oracle_samples;
    if (threads > 0) config.threads = threads;
    config.resolve();
  } catch (const sepspde::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    const sepspde::RunSummary summary = sepspde::run_benchmark(config, out_dir);
    std::cout << "problem " << summary.problem << ": " << summary.retained_terms
              << " retained terms";
    if (!summary.history.empty())
      std::cout << ", final eps_global " << summary.history.back().eps_global;
    std::cout << "\n";
    std::cout << "probe mean " << summary.probe_mean << ", std " << summary.probe_std << "\n";
    if (summary.oracle)
      std::cout << "oracle mean " << summary.oracle_mean << ", std " << summary.oracle_std
                << ", pdf L1 distance " << summary.pdf_l1 << "\n";
    std::cout << "artifacts written to " << out_dir << "\n";
    return kExitOk;
  } catch (const sepspde::NonConvergenceError& e) {
    std::cerr << "non-convergence: " << e.what() << " (partial artifacts in " << out_dir << ")\n";
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}
