#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "sepspde/burgers.hpp"
#include "sepspde/elliptic.hpp"
#include "sepspde/math.hpp"
#include "sepspde/wave.hpp"

namespace sepspde {

/// Probe-point samples from brute-force per-sample deterministic solves.
struct McResult {
  Vector probe_values;
  double mean = 0.0;
  double stddev = 0.0;
  std::string problem;
  int n_mc = 0;
  std::uint64_t seed = 0;
  int failures = 0;
};

/// Per-sample sparse solves of the sampled elliptic system.
McResult mc_solve_elliptic(const EllipticProblem& problem, int n_mc, std::uint64_t seed,
                           int threads = 1);

/// Per-sample nonlinear explicit marches of the forced Burgers equation.
McResult mc_solve_burgers(const BurgersProblem& problem, int n_mc, std::uint64_t seed,
                          int threads = 1);

/// Per-sample wave marches from sampled initial displacements.
McResult mc_solve_wave(const WaveProblem& problem, int n_mc, std::uint64_t seed, int threads = 1);

/// CSV rows (sample index, probe value).
void write_mc_csv(std::ostream& out, const McResult& result);

}  // namespace sepspde
