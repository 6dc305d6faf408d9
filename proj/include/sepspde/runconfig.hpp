#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "sepspde/errors.hpp"

namespace sepspde {

/// Invalid or unreadable run configuration; message carries file and line.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Flat key-value run description (one `key: value` per line, `#` comments).
struct RunConfig {
  std::string problem;  // elliptic | burgers | wave
  int dimension = 100;  // M
  int samples = 100000; // N
  std::uint64_t seed = 1;
  double eps1 = 0.0;  // 0 = per-problem default
  double eps2 = 1e-3;
  int max_outer = 50;
  int max_inner = 25;

  std::optional<int> mesh_nodes;     // elliptic / wave
  int time_points = 201;             // wave
  int nt = 101;                      // burgers
  int nx = 51;                       // burgers
  std::optional<double> probe_x, probe_y, probe_t;
  std::string initial_profile = "zero";  // burgers: zero | sine
  double initial_amplitude = 0.5;

  bool oracle = false;
  int oracle_samples = 20000;
  std::optional<std::uint64_t> oracle_seed;
  int threads = 1;
  int kde_points = 512;

  /// Fills per-problem defaults and checks all invariants.
  void resolve();
  std::uint64_t resolved_oracle_seed() const;
};

RunConfig parse_run_config(std::istream& in, const std::string& name);
RunConfig load_run_config(const std::string& path);

}  // namespace sepspde
