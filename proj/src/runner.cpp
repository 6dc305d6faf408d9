#include "sepspde/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>

#include "sepspde/burgers.hpp"
#include "sepspde/elliptic.hpp"
#include "sepspde/fdgrid.hpp"
#include "sepspde/mcoracle.hpp"
#include "sepspde/stats.hpp"
#include "sepspde/wave.hpp"

namespace sepspde {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
  std::ofstream out(std::filesystem::path(dir) / name);
  if (!out) throw Error("cannot write " + name + " in " + dir);
  return out;
}

void write_convergence_csv(const std::string& dir, const SeparatedSolution& u) {
  auto out = open_out(dir, "convergence.csv");
  out << "k,inner_iterations,eps_local_trace,eps_global\n";
  for (const auto& rec : u.history) {
    out << rec.k << "," << rec.inner_iterations << ",";
    for (size_t i = 0; i < rec.eps_local.size(); ++i) {
      if (i) out << ";";
      out << fmt(rec.eps_local[i]);
    }
    out << "," << fmt(rec.eps_global) << "\n";
  }
}

void write_lambda_csv(const std::string& dir, const SeparatedSolution& u) {
  auto out = open_out(dir, "lambda_samples.csv");
  out << "n";
  for (int i = 0; i < u.term_count(); ++i) out << ",lambda_" << (i + 1);
  out << "\n";
  const int n = u.term_count() > 0 ? static_cast<int>(u.couples.front().lambda.size()) : 0;
  for (int s = 0; s < n; ++s) {
    out << s;
    for (const auto& c : u.couples) out << "," << fmt(c.lambda[s]);
    out << "\n";
  }
}

// coordinate columns + one column per retained mode
void write_modes_csv(const std::string& dir, const SeparatedSolution& u,
                     const std::string& coord_header, int rows,
                     const std::function<void(std::ostream&, int)>& coords,
                     const std::function<double(int, int)>& value) {
  auto out = open_out(dir, "modes.csv");
  out << coord_header;
  for (int i = 0; i < u.term_count(); ++i) out << ",d_" << (i + 1);
  out << "\n";
  for (int r = 0; r < rows; ++r) {
    coords(out, r);
    for (int i = 0; i < u.term_count(); ++i) out << "," << fmt(value(i, r));
    out << "\n";
  }
}

struct ProbeData {
  Vector solver_samples;
  McResult mc;
};

void write_pdf_and_summary(const std::string& dir, const RunConfig& cfg, RunSummary& summary,
                           const SeparatedSolution& u, const ProbeData& probe) {
  summary.retained_terms = u.term_count();
  summary.history = u.history;

  summary.probe_mean = pairwise_mean(probe.solver_samples);
  const Vector centered = probe.solver_samples.array() - summary.probe_mean;
  summary.probe_std = std::sqrt(
      pairwise_sum(centered.size(), [&](std::ptrdiff_t i) { return centered[i] * centered[i]; }) /
      std::max<double>(1.0, static_cast<double>(centered.size() - 1)));

  const Vector grid = kde_grid(probe.solver_samples, cfg.kde_points);
  const DensityCurve pdf = kde(probe.solver_samples, grid);
  {
    auto out = open_out(dir, "pdf.csv");
    write_curve_csv(out, pdf);
  }
  if (cfg.oracle) {
    summary.oracle = true;
    summary.oracle_mean = probe.mc.mean;
    summary.oracle_std = probe.mc.stddev;
    summary.oracle_failures = probe.mc.failures;
    const DensityCurve oracle_pdf = kde(probe.mc.probe_values, grid);
    summary.pdf_l1 = pdf_l1_distance(pdf, oracle_pdf);
    {
      auto out = open_out(dir, "oracle_pdf.csv");
      write_curve_csv(out, oracle_pdf);
    }
    {
      auto out = open_out(dir, "oracle_samples.csv");
      write_mc_csv(out, probe.mc);
    }
  }

  auto out = open_out(dir, "summary.txt");
  out << "problem: " << cfg.problem << "\n";
  out << "M: " << cfg.dimension << "\n";
  out << "N: " << cfg.samples << "\n";
  out << "seed: " << cfg.seed << "\n";
  out << "eps1: " << fmt(cfg.eps1) << "\n";
  out << "eps2: " << fmt(cfg.eps2) << "\n";
  out << "retained_terms: " << summary.retained_terms << "\n";
  for (const auto& rec : u.history)
    out << "eps_global_k" << rec.k << ": " << fmt(rec.eps_global)
        << (rec.retained ? "" : " (candidate, not retained)")
        << (rec.hit_max_inner ? " (inner loop hit max_inner)" : "") << "\n";
  out << "probe: (" << *cfg.probe_x << ", " << *cfg.probe_y << ", " << *cfg.probe_t << ")\n";
  out << "probe_mean: " << fmt(summary.probe_mean) << "\n";
  out << "probe_std: " << fmt(summary.probe_std) << "\n";
  if (cfg.oracle) {
    out << "oracle_samples: " << probe.mc.n_mc << "\n";
    out << "oracle_failures: " << probe.mc.failures << "\n";
    out << "oracle_mean: " << fmt(summary.oracle_mean) << "\n";
    out << "oracle_std: " << fmt(summary.oracle_std) << "\n";
    out << "pdf_l1_distance: " << fmt(summary.pdf_l1) << "\n";
  }
  out << "enrich_time_s: " << fmt(summary.enrich_seconds) << "\n";
  out << "wall_time_s: " << fmt(summary.wall_seconds) << "\n";
}

}  // namespace

RunSummary run_benchmark(const RunConfig& raw_config, const std::string& out_dir) {
  RunConfig cfg = raw_config;
  cfg.resolve();
  std::filesystem::create_directories(out_dir);

  RunSummary summary;
  summary.problem = cfg.problem;
  summary.dimension = cfg.dimension;
  summary.samples = cfg.samples;
  summary.seed = cfg.seed;
  summary.eps1 = cfg.eps1;
  summary.eps2 = cfg.eps2;

  const EnrichOptions opts{cfg.eps1, cfg.eps2, cfg.max_outer, cfg.max_inner};
  const auto t0 = std::chrono::steady_clock::now();
  const auto seconds_since = [](auto start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  const auto enrich = [&](ProblemAdapter& adapter, const auto& write_partial) {
    const auto te = std::chrono::steady_clock::now();
    try {
      SeparatedSolution u = enrich_until_converged(adapter, opts);
      summary.enrich_seconds = seconds_since(te);
      return u;
    } catch (NonConvergenceError& e) {
      summary.enrich_seconds = seconds_since(te);
      write_partial(e.partial);
      throw;
    }
  };

  if (cfg.problem == "elliptic") {
    EllipticConfig pc;
    pc.mesh_nodes = *cfg.mesh_nodes;
    pc.dimension = cfg.dimension;
    pc.samples = cfg.samples;
    pc.seed = cfg.seed;
    pc.probe_x = *cfg.probe_x;
    pc.probe_y = *cfg.probe_y;
    EllipticProblem problem(pc);
    const auto write_static = [&](const SeparatedSolution& u) {
      write_convergence_csv(out_dir, u);
      {
        auto out = open_out(out_dir, "history.csv");
        write_history_csv(out, u);
      }
      write_lambda_csv(out_dir, u);
      const TriMesh& mesh = problem.mesh();
      std::vector<Vector> full;
      full.reserve(u.couples.size());
      for (const auto& c : u.couples) full.push_back(expand_with_boundary_zeros(mesh, c.d));
      write_modes_csv(
          out_dir, u, "x,y", mesh.node_count(),
          [&](std::ostream& o, int r) { o << fmt(mesh.nodes(r, 0)) << "," << fmt(mesh.nodes(r, 1)); },
          [&](int i, int r) { return full[static_cast<size_t>(i)][r]; });
    };
    SeparatedSolution u = enrich(problem, write_static);
    write_static(u);
    ProbeData probe;
    probe.solver_samples = problem.probe_samples(u);
    if (cfg.oracle)
      probe.mc = mc_solve_elliptic(problem, cfg.oracle_samples, cfg.resolved_oracle_seed(),
                                   cfg.threads);
    summary.wall_seconds = seconds_since(t0);
    write_pdf_and_summary(out_dir, cfg, summary, u, probe);
  } else if (cfg.problem == "burgers") {
    BurgersConfig pc;
    pc.nt = cfg.nt;
    pc.nx = cfg.nx;
    pc.dimension = cfg.dimension;
    pc.samples = cfg.samples;
    pc.seed = cfg.seed;
    pc.probe_x = *cfg.probe_x;
    pc.probe_t = *cfg.probe_t;
    pc.initial_profile = cfg.initial_profile == "sine" ? BurgersConfig::InitialProfile::Sine
                                                       : BurgersConfig::InitialProfile::Zero;
    pc.initial_amplitude = cfg.initial_amplitude;
    BurgersProblem problem(pc);
    const SpaceTimeGrid& grid = problem.grid();
    const auto write_static = [&](const SeparatedSolution& u) {
      write_convergence_csv(out_dir, u);
      {
        auto out = open_out(out_dir, "history.csv");
        write_history_csv(out, u);
      }
      write_lambda_csv(out_dir, u);
      write_modes_csv(
          out_dir, u, "t,x", grid.size(),
          [&](std::ostream& o, int r) {
            o << fmt(grid.t(r / grid.nx)) << "," << fmt(grid.x(r % grid.nx));
          },
          [&](int i, int r) { return u.couples[static_cast<size_t>(i)].d[r]; });
    };
    SeparatedSolution u = enrich(problem, write_static);
    write_static(u);
    ProbeData probe;
    probe.solver_samples = problem.probe_samples(u);
    if (cfg.oracle)
      probe.mc =
          mc_solve_burgers(problem, cfg.oracle_samples, cfg.resolved_oracle_seed(), cfg.threads);
    summary.wall_seconds = seconds_since(t0);
    write_pdf_and_summary(out_dir, cfg, summary, u, probe);
  } else {
    WaveConfig pc;
    pc.mesh_nodes = *cfg.mesh_nodes;
    pc.time_points = cfg.time_points;
    pc.dimension = cfg.dimension;
    pc.samples = cfg.samples;
    pc.seed = cfg.seed;
    pc.probe_x = *cfg.probe_x;
    pc.probe_y = *cfg.probe_y;
    pc.probe_t = *cfg.probe_t;
    WaveProblem problem(pc);
    const TriMesh& mesh = problem.op().mesh();
    const int nd = mesh.interior_count();
    const auto write_static = [&](const SeparatedSolution& u) {
      write_convergence_csv(out_dir, u);
      {
        auto out = open_out(out_dir, "history.csv");
        write_history_csv(out, u);
      }
      write_lambda_csv(out_dir, u);
      const int rows = cfg.time_points * mesh.node_count();
      write_modes_csv(
          out_dir, u, "t,x,y", rows,
          [&](std::ostream& o, int r) {
            const int it = r / mesh.node_count();
            const int node = r % mesh.node_count();
            o << fmt(it * problem.dt()) << "," << fmt(mesh.nodes(node, 0)) << ","
              << fmt(mesh.nodes(node, 1));
          },
          [&](int i, int r) {
            const int it = r / mesh.node_count();
            const int node = r % mesh.node_count();
            const int slot = mesh.interior_index[node];
            return slot >= 0
                       ? u.couples[static_cast<size_t>(i)].d[static_cast<Eigen::Index>(it) * nd + slot]
                       : 0.0;
          });
    };
    SeparatedSolution u = enrich(problem, write_static);
    write_static(u);
    ProbeData probe;
    probe.solver_samples = problem.probe_samples(u);
    if (cfg.oracle)
      probe.mc =
          mc_solve_wave(problem, cfg.oracle_samples, cfg.resolved_oracle_seed(), cfg.threads);
    summary.wall_seconds = seconds_since(t0);
    write_pdf_and_summary(out_dir, cfg, summary, u, probe);
  }
  return summary;
}

}  // namespace sepspde
