#pragma once

#include <string>
#include <vector>

#include "sepspde/runconfig.hpp"
#include "sepspde/separated.hpp"

namespace sepspde {

struct RunSummary {
  std::string problem;
  int dimension = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  double eps1 = 0.0, eps2 = 0.0;
  int retained_terms = 0;
  std::vector<ConvergenceRecord> history;
  double probe_mean = 0.0, probe_std = 0.0;
  bool oracle = false;
  double oracle_mean = 0.0, oracle_std = 0.0;
  int oracle_failures = 0;
  double pdf_l1 = 0.0;
  double enrich_seconds = 0.0;
  double wall_seconds = 0.0;
};

/// Runs one benchmark and writes convergence.csv, history.csv, modes.csv,
/// lambda_samples.csv, pdf.csv, summary.txt (plus oracle_pdf.csv and
/// oracle_samples.csv when the oracle is on) into out_dir.
/// On non-convergence the partial artifacts are written before the
/// NonConvergenceError propagates.
RunSummary run_benchmark(const RunConfig& config, const std::string& out_dir);

}  // namespace sepspde
