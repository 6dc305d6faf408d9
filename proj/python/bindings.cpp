#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <span>
#include <string>

#include "sepspde/burgers.hpp"
#include "sepspde/fem2d.hpp"
#include "sepspde/klexp.hpp"
#include "sepspde/runner.hpp"
#include "sepspde/sampling.hpp"
#include "sepspde/stats.hpp"

namespace py = pybind11;
using namespace sepspde;

namespace {

RunConfig config_from_dict(const py::dict& options) {
  RunConfig cfg;
  for (const auto& item : options) {
    const std::string key = py::cast<std::string>(item.first);
    const py::handle value = item.second;
    if (key == "problem")
      cfg.problem = py::cast<std::string>(value);
    else if (key == "M")
      cfg.dimension = py::cast<int>(value);
    else if (key == "N")
      cfg.samples = py::cast<int>(value);
    else if (key == "seed")
      cfg.seed = py::cast<std::uint64_t>(value);
    else if (key == "eps1") {
      cfg.eps1 = py::cast<double>(value);
      if (!(cfg.eps1 > 0.0)) throw ConfigError("eps1 must be > 0");
    } else if (key == "eps2") {
      cfg.eps2 = py::cast<double>(value);
      if (!(cfg.eps2 > 0.0)) throw ConfigError("eps2 must be > 0");
    }
    else if (key == "max_outer")
      cfg.max_outer = py::cast<int>(value);
    else if (key == "max_inner")
      cfg.max_inner = py::cast<int>(value);
    else if (key == "mesh_nodes")
      cfg.mesh_nodes = py::cast<int>(value);
    else if (key == "time_points")
      cfg.time_points = py::cast<int>(value);
    else if (key == "nt")
      cfg.nt = py::cast<int>(value);
    else if (key == "nx")
      cfg.nx = py::cast<int>(value);
    else if (key == "probe_x")
      cfg.probe_x = py::cast<double>(value);
    else if (key == "probe_y")
      cfg.probe_y = py::cast<double>(value);
    else if (key == "probe_t")
      cfg.probe_t = py::cast<double>(value);
    else if (key == "initial_profile")
      cfg.initial_profile = py::cast<std::string>(value);
    else if (key == "initial_amplitude")
      cfg.initial_amplitude = py::cast<double>(value);
    else if (key == "oracle")
      cfg.oracle = py::cast<bool>(value);
    else if (key == "oracle_samples")
      cfg.oracle_samples = py::cast<int>(value);
    else if (key == "oracle_seed")
      cfg.oracle_seed = py::cast<std::uint64_t>(value);
    else if (key == "threads")
      cfg.threads = py::cast<int>(value);
    else if (key == "kde_points")
      cfg.kde_points = py::cast<int>(value);
    else
      throw ConfigError("unknown config key '" + key + "'");
  }
  return cfg;
}

py::dict summary_to_dict(const RunSummary& s) {
  py::dict out;
  out["problem"] = s.problem;
  out["M"] = s.dimension;
  out["N"] = s.samples;
  out["seed"] = s.seed;
  out["eps1"] = s.eps1;
  out["eps2"] = s.eps2;
  out["retained_terms"] = s.retained_terms;
  py::list eps_global, retained;
  for (const auto& rec : s.history) {
    eps_global.append(rec.eps_global);
    retained.append(rec.retained);
  }
  out["eps_global"] = eps_global;
  out["retained"] = retained;
  out["probe_mean"] = s.probe_mean;
  out["probe_std"] = s.probe_std;
  out["oracle"] = s.oracle;
  if (s.oracle) {
    out["oracle_mean"] = s.oracle_mean;
    out["oracle_std"] = s.oracle_std;
    out["oracle_failures"] = s.oracle_failures;
    out["pdf_l1_distance"] = s.pdf_l1;
  }
  out["enrich_time_s"] = s.enrich_seconds;
  out["wall_time_s"] = s.wall_seconds;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sample-based separated-representation solver for stochastic PDEs";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NonConvergenceError>(m, "NonConvergenceError", PyExc_RuntimeError);

  m.def(
      "generate",
      [](const std::string& distribution, int n, int mm, std::uint64_t seed) {
        return generate(distribution_from_string(distribution), n, mm, seed).samples;
      },
      py::arg("distribution"), py::arg("n"), py::arg("m"), py::arg("seed"),
      "N x M table of independent samples; column j depends only on (seed, j)");

  m.def(
      "ensemble_column",
      [](const std::string& distribution, int n, int column, std::uint64_t seed) {
        return ensemble_column(distribution_from_string(distribution), n, column, seed);
      },
      py::arg("distribution"), py::arg("n"), py::arg("column"), py::arg("seed"));

  m.def(
      "expectation", [](const Vector& values) { return expectation(values); }, py::arg("values"),
      "Sample mean (pairwise summation)");
  m.def(
      "expectation_product",
      [](const Vector& a, const Vector& b, const Vector& c) {
        return expectation_product(a, b, c);
      },
      py::arg("a"), py::arg("b"), py::arg("c"),
      "Sample mean of the elementwise triple product");

  m.def(
      "brownian_force_eval",
      [](const Vector& xi_row, double t) {
        return brownian_force_eval(std::span(xi_row.data(), static_cast<size_t>(xi_row.size())), t);
      },
      py::arg("xi_row"), py::arg("t"));
  m.def(
      "wave_ic_eval",
      [](const Vector& xi_row, double r) {
        return wave_ic_eval(std::span(xi_row.data(), static_cast<size_t>(xi_row.size())), r);
      },
      py::arg("xi_row"), py::arg("r"));

  m.def(
      "kl_eigenvalues",
      [](int count, int mesh_nodes) {
        const TriMesh mesh = mesh_square(mesh_nodes);
        const KlBasis basis = exp_kernel_eigenpairs(mesh, count);
        Vector nu(count);
        for (int j = 0; j < count; ++j) nu[j] = basis.nu[static_cast<size_t>(j)];
        return nu;
      },
      py::arg("count"), py::arg("mesh_nodes") = 808,
      "Largest tensor-product singular values of the exponential kernel on the unit square");

  m.def(
      "solve_scalar_quadratic",
      [](double a, double b, double c, double previous) {
        const QuadraticRoot r = solve_scalar_quadratic(a, b, c, previous);
        return py::make_tuple(r.value, r.real_root, r.residual);
      },
      py::arg("a"), py::arg("b"), py::arg("c"), py::arg("previous") = 0.0,
      "Stable quadratic root with closest-to-previous selection");

  m.def(
      "kde_grid", [](const Vector& samples, int points) { return kde_grid(samples, points); },
      py::arg("samples"), py::arg("points") = 512);
  m.def(
      "kde", [](const Vector& samples, const Vector& grid) { return kde(samples, grid).density; },
      py::arg("samples"), py::arg("grid"),
      "Gaussian kernel density with Silverman bandwidth, evaluated on the grid");
  m.def(
      "pdf_l1_distance",
      [](const Vector& grid, const Vector& density_a, const Vector& density_b) {
        const DensityCurve a{grid, density_a};
        const DensityCurve b{grid, density_b};
        return pdf_l1_distance(a, b);
      },
      py::arg("grid"), py::arg("density_a"), py::arg("density_b"));

  m.def(
      "run",
      [](const py::dict& config, const std::string& out_dir) {
        return summary_to_dict(run_benchmark(config_from_dict(config), out_dir));
      },
      py::arg("config"), py::arg("out_dir"),
      "Run one benchmark from a config dict; writes artifacts and returns the summary");

  m.def(
      "run_file",
      [](const std::string& config_path, const std::string& out_dir) {
        return summary_to_dict(run_benchmark(load_run_config(config_path), out_dir));
      },
      py::arg("config_path"), py::arg("out_dir"),
      "Run one benchmark from a key: value config file");
}
