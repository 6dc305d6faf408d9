#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "sepspde/fem2d.hpp"
#include "sepspde/klexp.hpp"
#include "sepspde/sampling.hpp"

using namespace sepspde;

TEST_CASE("1d eigenpairs match a Nystrom discretization") {
  const auto modes = exp_kernel_eigenpairs_1d(8);
  const Eigen::VectorXd ref = oracles::nystrom_eigenvalues_1d(800);
  for (int i = 0; i < 8; ++i) {
    CHECK(modes[i].lambda == doctest::Approx(ref[i]).epsilon(5e-3));
    if (i > 0) CHECK(modes[i].lambda < modes[i - 1].lambda);
  }
  // trace of the covariance operator is 1
  const auto many = exp_kernel_eigenpairs_1d(400);
  double trace = 0.0;
  for (const auto& m : many) trace += m.lambda;
  CHECK(trace <= 1.0 + 1e-12);
  CHECK(trace > 0.995);
}

TEST_CASE("1d eigenfunctions satisfy the integral equation and are orthonormal") {
  const auto modes = exp_kernel_eigenpairs_1d(6);
  for (const auto& mode : modes) {
    // residual of the Fredholm equation on a fine midpoint grid
    const int n = 2000;
    double resid2 = 0.0, scale2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = (i + 0.5) / n;
      double integral = 0.0;
      for (int j = 0; j < n; ++j) {
        const double s = (j + 0.5) / n;
        integral += std::exp(-std::abs(x - s)) * mode.evaluate(s);
      }
      integral /= n;
      const double r = integral - mode.lambda * mode.evaluate(x);
      resid2 += r * r;
      scale2 += mode.evaluate(x) * mode.evaluate(x);
    }
    CHECK(std::sqrt(resid2 / scale2) / mode.lambda <= 1e-3);
  }
  for (size_t a = 0; a < modes.size(); ++a)
    for (size_t b = 0; b <= a; ++b) {
      const double ip = oracles::simpson_01(
          [&](double x) { return modes[a].evaluate(x) * modes[b].evaluate(x); }, 4000);
      CHECK(ip == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-8).scale(1.0));
    }
}

TEST_CASE("tensor basis ordering, norms, and sign convention") {
  const TriMesh mesh = mesh_square(400);
  const KlBasis basis = exp_kernel_eigenpairs(mesh, 10);

  // descending eigenvalues; degenerate pairs tie-broken lexicographically
  for (int j = 1; j < 10; ++j) CHECK(basis.nu[j] <= basis.nu[j - 1] + 1e-15);
  CHECK(basis.nu[0] > 0.0);
  CHECK(basis.tensor_index[0] == std::pair<int, int>{0, 0});
  CHECK(basis.nu[1] == doctest::Approx(basis.nu[2]).epsilon(1e-13));
  CHECK(basis.tensor_index[1] == std::pair<int, int>{0, 1});
  CHECK(basis.tensor_index[2] == std::pair<int, int>{1, 0});

  // M = 1: the top mode is the product of the two largest 1d eigenpairs
  const KlBasis one = exp_kernel_eigenpairs(mesh, 1);
  const auto m1d = exp_kernel_eigenpairs_1d(1);
  CHECK(one.nu[0] * one.nu[0] == doctest::Approx(m1d[0].lambda * m1d[0].lambda).epsilon(1e-12));

  // unit discrete L2 norm and positive leading nodal value
  const SpMat mass = assemble_mass(mesh);
  for (int j = 0; j < 10; ++j) {
    const Vector v = basis.modes.col(j);
    CHECK(std::abs(v.dot(mass * v) - 1.0) <= 1e-12);
    for (int i = 0; i < v.size(); ++i)
      if (std::abs(v[i]) > 1e-12 * v.cwiseAbs().maxCoeff()) {
        CHECK(v[i] > 0.0);
        break;
      }
  }

  // trace bound on the truncated spectrum
  double sum = 0.0;
  for (double nu : basis.nu) sum += nu * nu;
  CHECK(sum <= 1.0);
}

TEST_CASE("tensor eigenvalues match the 2d Nystrom oracle") {
  const TriMesh mesh = mesh_square(100);
  const KlBasis basis = exp_kernel_eigenpairs(mesh, 10);
  const Eigen::VectorXd ref = oracles::nystrom_eigenvalues_2d(40, 10);
  for (int j = 0; j < 10; ++j)
    CHECK(basis.nu[j] * basis.nu[j] == doctest::Approx(ref[j]).epsilon(0.01));
}

TEST_CASE("2d modes satisfy the integral equation under Nystrom quadrature") {
  const TriMesh mesh = mesh_square(36);
  const KlBasis basis = exp_kernel_eigenpairs(mesh, 6);
  const int n = 80;
  for (int mode : {0, 1, 2}) {
    const double nu2 = basis.nu[mode] * basis.nu[mode];
    double resid2 = 0.0, scale2 = 0.0;
    for (int a = 0; a < n * n; ++a) {
      const double xa = (a % n + 0.5) / n, ya = (a / n + 0.5) / n;
      double integral = 0.0;
      for (int b = 0; b < n * n; ++b) {
        const double xb = (b % n + 0.5) / n, yb = (b / n + 0.5) / n;
        integral += std::exp(-std::abs(xa - xb) - std::abs(ya - yb)) * basis.evaluate_raw(mode, xb, yb);
      }
      integral /= n * n;
      const double r = integral - nu2 * basis.evaluate_raw(mode, xa, ya);
      resid2 += r * r;
      scale2 += nu2 * basis.evaluate_raw(mode, xa, ya) * nu2 * basis.evaluate_raw(mode, xa, ya);
    }
    CHECK(std::sqrt(resid2) / std::sqrt(scale2) <= 1e-3);
  }
}

TEST_CASE("brownian force series") {
  const double xi1[] = {1.0, 0.0, 0.0};
  CHECK(brownian_force_eval(xi1, 0.0) == 0.0);
  // sqrt(2)/5 * sin(pi/2) / (pi/2) = 2 sqrt(2) / (5 pi)
  CHECK(brownian_force_eval(std::span(xi1, 1), 1.0) ==
        doctest::Approx(0.18006326323142122).epsilon(1e-14));

  // ensemble variance at t = 1 approaches sigma_f^2 * 1 = 0.04
  const int n = 20000, m = 200;
  Vector f1 = Vector::Zero(n);
  for (int j = 0; j < m; ++j) {
    const double w = (j + 0.5) * std::numbers::pi;
    const double phi = std::numbers::sqrt2 / 5.0 * std::sin(w) / w;
    f1 += phi * ensemble_column(Distribution::StandardNormal, n, j, 99);
  }
  const double mean = pairwise_mean(f1);
  const double var = (f1.array() - mean).square().sum() / (n - 1);
  CHECK(var == doctest::Approx(0.04).epsilon(0.05));

  // covariance between t = 0.5 and t = 1.0 approaches 0.02
  Vector fh = Vector::Zero(n);
  for (int j = 0; j < m; ++j) {
    const double w = (j + 0.5) * std::numbers::pi;
    const double phi = std::numbers::sqrt2 / 5.0 * std::sin(0.5 * w) / w;
    fh += phi * ensemble_column(Distribution::StandardNormal, n, j, 99);
  }
  const double mh = pairwise_mean(fh);
  const double cov = ((f1.array() - mean) * (fh.array() - mh)).sum() / (n - 1);
  CHECK(cov == doctest::Approx(0.02).epsilon(0.08));
}

TEST_CASE("wave initial-value series") {
  const double xi[] = {0.0, 1.0, 0.0};
  CHECK(wave_ic_eval(xi, 0.0) == 0.0);
  CHECK(std::abs(wave_ic_eval(xi, 1.0)) <= 1e-12);
  CHECK(wave_ic_eval(xi, 0.25) == doctest::Approx(std::numbers::sqrt2).epsilon(1e-14));
}
