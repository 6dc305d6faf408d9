#include "sepspde/mcoracle.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>
#include <vector>

#include "sepspde/errors.hpp"
#include "sepspde/fdgrid.hpp"

namespace sepspde {

namespace {

void finalize(McResult& r) {
  // drop failed samples (NaN slots), then aggregate deterministically
  const Eigen::Index n = r.probe_values.size();
  Eigen::Index keep = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::isfinite(r.probe_values[i])) r.probe_values[keep++] = r.probe_values[i];
  r.failures = static_cast<int>(n - keep);
  r.probe_values.conservativeResize(keep);
  if (r.failures > 0 && r.failures * 100 > r.n_mc)
    throw OracleError("mc oracle: more than 1% of the samples failed");
  if (keep == 0) throw OracleError("mc oracle: no successful samples");
  r.mean = pairwise_mean(r.probe_values);
  const Vector centered = r.probe_values.array() - r.mean;
  r.stddev = std::sqrt(pairwise_sum(centered.size(), [&](std::ptrdiff_t i) {
               return centered[i] * centered[i];
             }) /
             std::max<double>(1.0, static_cast<double>(keep - 1)));
}

// contiguous blocks, one worker per block, results written to disjoint slots
void run_blocks(int n, int threads, const std::function<void(int, int)>& block_fn) {
  if (threads <= 1) {
    block_fn(0, n);
    return;
  }
  const int workers = std::min(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const int chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int lo = w * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] { block_fn(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

McResult mc_solve_elliptic(const EllipticProblem& problem, int n_mc, std::uint64_t seed,
                           int threads) {
  if (n_mc < 2) throw std::invalid_argument("mc_solve_elliptic: n_mc must be >= 2");
  const int m = problem.config().dimension;
  Matrix xi(n_mc, m);
  for (int j = 0; j < m; ++j) xi.col(j) = ensemble_column(Distribution::Uniform, n_mc, j, seed);

  McResult result;
  result.problem = "elliptic";
  result.n_mc = n_mc;
  result.seed = seed;
  result.probe_values.setConstant(n_mc, std::numeric_limits<double>::quiet_NaN());

  run_blocks(n_mc, threads, [&](int lo, int hi) {
    SparseSolver solver(problem.op().K[0]);
    for (int s = lo; s < hi; ++s) {
      try {
        const SpMat a = problem.op().combine(xi.row(s).transpose());
        solver.factorize(a);
        const Vector u = solver.solve(problem.op().F);
        result.probe_values[s] = problem.probe_value(u);
      } catch (const Error&) {
        // recorded as a failure
      }
    }
  });
  finalize(result);
  return result;
}

McResult mc_solve_burgers(const BurgersProblem& problem, int n_mc, std::uint64_t seed,
                          int threads) {
  if (n_mc < 2) throw std::invalid_argument("mc_solve_burgers: n_mc must be >= 2");
  const BurgersConfig& cfg = problem.config();
  const SpaceTimeGrid grid = problem.grid();
  SampleEnsemble ensemble = generate(Distribution::StandardNormal, n_mc, cfg.dimension, seed);
  const Matrix force = force_samples(cfg, ensemble);
  ensemble.samples.resize(0, 0);
  const Vector u0 = problem.initial_profile_values();

  McResult result;
  result.problem = "burgers";
  result.n_mc = n_mc;
  result.seed = seed;
  result.probe_values.setConstant(n_mc, std::numeric_limits<double>::quiet_NaN());

  const int nt = grid.nt, nx = grid.nx;
  const double dt = grid.dt(), dx = grid.dx();
  run_blocks(n_mc, threads, [&](int lo, int hi) {
    Matrix u(nt, nx);
    Vector g(nx), gx(nx), rhs(nx), half(nx), next(nx);
    const auto eval_rhs = [&](const Vector& state, double f_value, Vector& out) {
      g = 0.5 * state.array().square().matrix();
      ddx_row(g, dx, gx);
      out = Vector::Constant(nx, f_value) - gx;
      if (cfg.gamma != 0.0)
        for (int i = 1; i + 1 < nx; ++i)
          out[i] += cfg.gamma * (state[i + 1] - 2.0 * state[i] + state[i - 1]) / (dx * dx);
    };
    const auto extrapolate = [&](Vector& v) {
      v[0] = 2.0 * v[1] - v[2];
      v[nx - 1] = 2.0 * v[nx - 2] - v[nx - 3];
    };
    for (int s = lo; s < hi; ++s) {
      try {
        u.row(0) = u0.transpose();
        eval_rhs(u.row(0).transpose(), force(s, 0), rhs);
        half = u.row(0).transpose() + 0.5 * dt * rhs;
        extrapolate(half);
        eval_rhs(half, 0.5 * (force(s, 0) + force(s, 1)), rhs);
        next = u.row(0).transpose() + dt * rhs;
        extrapolate(next);
        u.row(1) = next.transpose();
        for (int m = 1; m + 1 < nt; ++m) {
          const Vector state = u.row(m).transpose();
          const double speed = state.cwiseAbs().maxCoeff();
          if (!(speed * dt / dx <= 1.0) || !state.allFinite())
            throw StabilityError("mc burgers: CFL violated", m);
          eval_rhs(state, force(s, m), rhs);
          next = u.row(m - 1).transpose() + 2.0 * dt * rhs;
          extrapolate(next);
          u.row(m + 1) = next.transpose();
        }
        SpaceTimeField field{grid, u};
        result.probe_values[s] = problem.probe_value(flatten(field));
      } catch (const Error&) {
      }
    }
  });
  finalize(result);
  return result;
}

McResult mc_solve_wave(const WaveProblem& problem, int n_mc, std::uint64_t seed, int threads) {
  if (n_mc < 2) throw std::invalid_argument("mc_solve_wave: n_mc must be >= 2");
  const int m = problem.config().dimension;
  Matrix xi(n_mc, m);
  for (int j = 0; j < m; ++j) xi.col(j) = ensemble_column(Distribution::StandardNormal, n_mc, j, seed);

  McResult result;
  result.problem = "wave";
  result.n_mc = n_mc;
  result.seed = seed;
  result.probe_values.setConstant(n_mc, std::numeric_limits<double>::quiet_NaN());

  const int nt = problem.config().time_points;
  const double dt = problem.dt();
  run_blocks(n_mc, threads, [&](int lo, int hi) {
    for (int s = lo; s < hi; ++s) {
      try {
        const Vector g = problem.initial_displacement(xi.row(s).transpose());
        const Matrix slices = problem.op().step(g, nt, dt);
        result.probe_values[s] = problem.probe_value_slices(slices);
      } catch (const Error&) {
      }
    }
  });
  finalize(result);
  return result;
}

void write_mc_csv(std::ostream& out, const McResult& result) {
  char buf[40];
  out << "sample,probe_value\n";
  for (Eigen::Index i = 0; i < result.probe_values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", result.probe_values[i]);
    out << i << "," << buf << "\n";
  }
}

}  // namespace sepspde
