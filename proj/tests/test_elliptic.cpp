#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "sepspde/elliptic.hpp"
#include "sepspde/mcoracle.hpp"

using namespace sepspde;

namespace {

EllipticConfig small_config(int dimension, int samples, int mesh_nodes = 25) {
  EllipticConfig cfg;
  cfg.mesh_nodes = mesh_nodes;
  cfg.dimension = dimension;
  cfg.samples = samples;
  cfg.seed = 21;
  return cfg;
}

// antithetic table: column sample means vanish exactly under pairwise sums
Matrix antithetic_table(int n_half, int m, std::uint64_t seed) {
  Matrix top(n_half, m);
  for (int j = 0; j < m; ++j) top.col(j) = ensemble_column(Distribution::Uniform, n_half, j, seed);
  Matrix full(2 * n_half, m);
  full.topRows(n_half) = top;
  full.bottomRows(n_half) = -top;
  return full;
}

}  // namespace

TEST_CASE("deterministic update with centered unit lambda reduces to K_0") {
  EllipticProblem problem(small_config(2, 0), antithetic_table(32, 2, 5));
  SeparatedSolution empty;
  const Vector d = problem.deterministic_update(Vector::Ones(64), empty);
  const Vector reference = solve_sparse(problem.op().K[0], problem.op().F);
  CHECK((d - reference).cwiseAbs().maxCoeff() <= 1e-12 * reference.cwiseAbs().maxCoeff());
}

TEST_CASE("zero lambda samples are rejected") {
  EllipticProblem problem(small_config(2, 16));
  SeparatedSolution empty;
  CHECK_THROWS_AS(problem.deterministic_update(Vector::Zero(16), empty), DegenerateError);
}

TEST_CASE("weighted operator matches a direct-summation oracle") {
  EllipticProblem problem(small_config(2, 1024));
  SeparatedSolution prev;
  // one synthetic previous couple so the c_kij path is exercised
  Vector d0 = Vector::Zero(problem.op().dim());
  d0[0] = 1.0;
  prev.couples.push_back({ensemble_column(Distribution::StandardNormal, 1024, 7, 3), d0});

  const Vector lambda = ensemble_column(Distribution::StandardNormal, 1024, 9, 3).array() + 0.5;

  // brute force: naive accumulation of c_kkj = sum_n lambda_n^2 xi_jn / N
  const Matrix& xi = problem.xi();
  Vector c_kk = Vector::Zero(3);
  for (int n = 0; n < 1024; ++n) {
    const double w = lambda[n] * lambda[n];
    c_kk[0] += w;
    c_kk[1] += w * xi(n, 0);
    c_kk[2] += w * xi(n, 1);
  }
  c_kk /= 1024.0;
  Matrix ktilde_ref = c_kk[0] * Matrix(problem.op().K[0]);
  ktilde_ref += c_kk[1] * Matrix(problem.op().K[1]);
  ktilde_ref += c_kk[2] * Matrix(problem.op().K[2]);

  const SpMat combined = problem.op().combine_weighted(c_kk);
  CHECK((Matrix(combined) - ktilde_ref).cwiseAbs().maxCoeff() <=
        1e-12 * ktilde_ref.cwiseAbs().maxCoeff());

  // the full update solves K~ d = F~; verify against a dense oracle
  const Vector d = problem.deterministic_update(lambda, prev);
  Vector rhs = pairwise_mean(lambda) * problem.op().F;
  Vector c_k1 = Vector::Zero(3);
  for (int n = 0; n < 1024; ++n) {
    const double w = lambda[n] * prev.couples[0].lambda[n];
    c_k1[0] += w;
    c_k1[1] += w * xi(n, 0);
    c_k1[2] += w * xi(n, 1);
  }
  c_k1 /= 1024.0;
  for (int j = 0; j < 3; ++j) rhs -= c_k1[j] * (Matrix(problem.op().K[j]) * d0);
  const Vector d_ref = oracles::dense_solve(ktilde_ref, rhs);
  CHECK((d - d_ref).cwiseAbs().maxCoeff() <= 1e-10 * d_ref.cwiseAbs().maxCoeff());
}

TEST_CASE("stochastic update matches the matrix-form ratio per sample") {
  EllipticProblem problem(small_config(2, 64));
  SeparatedSolution prev;
  Vector d0(problem.op().dim());
  for (int i = 0; i < d0.size(); ++i) d0[i] = std::sin(1.0 + i);
  d0 /= std::sqrt(problem.space_dot(d0, d0));
  prev.couples.push_back({ensemble_column(Distribution::StandardNormal, 64, 3, 11), d0});

  Vector d(problem.op().dim());
  for (int i = 0; i < d.size(); ++i) d[i] = std::cos(0.3 * i) + 0.1;
  d /= std::sqrt(problem.space_dot(d, d));

  const Vector lambda = problem.stochastic_update(d, prev, Vector::Zero(64));
  for (int n : {0, 13, 63}) {
    const SpMat a = problem.op().combine(problem.xi().row(n).transpose());
    const Vector u_prev = prev.couples[0].lambda[n] * d0;
    const double expected = d.dot(problem.op().F - a * u_prev) / d.dot(a * d);
    CHECK(lambda[n] == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("M = 0 stochastic update is constant across samples") {
  EllipticProblem problem(small_config(0, 16));
  SeparatedSolution empty;
  Vector d = Vector::Ones(problem.op().dim());
  d /= std::sqrt(problem.space_dot(d, d));
  const Vector lambda = problem.stochastic_update(d, empty, Vector::Zero(16));
  const double expected = d.dot(problem.op().F) / d.dot(problem.op().K[0] * d);
  CHECK((lambda.array() - expected).abs().maxCoeff() <= 1e-15 * std::abs(expected));
}

TEST_CASE("Galerkin orthogonality holds at the discrete measure") {
  EllipticProblem problem(small_config(3, 256, 49));
  const EnrichOptions opts{1e-8, 1e-6, 20, 40};
  const SeparatedSolution u = enrich_until_converged(problem, opts);
  REQUIRE(u.term_count() >= 1);

  // E{ lambda_k (d_k^T F - sum_j sum_{i<=k} e_kji lambda_i xi_j) } == 0
  const int k = u.term_count() - 1;
  const Vector& d = u.couples[k].d;
  const Vector& lambda = u.couples[k].lambda;
  const int n = problem.sample_count();
  Vector residual(n);
  for (int s = 0; s < n; ++s) {
    const SpMat a = problem.op().combine(problem.xi().row(s).transpose());
    double r = d.dot(problem.op().F);
    for (int i = 0; i <= k; ++i) r -= u.couples[i].lambda[s] * d.dot(a * u.couples[i].d);
    residual[s] = r;
  }
  const double scale = std::abs(d.dot(problem.op().F));
  CHECK(std::abs(pairwise_mean(lambda.cwiseProduct(residual))) <= 1e-10 * scale);
}

TEST_CASE("sampled operators stay coercive over the ensemble") {
  EllipticProblem problem(small_config(8, 64, 100));
  Vector d(problem.op().dim());
  for (int i = 0; i < d.size(); ++i) d[i] = std::sin(0.7 * i) + 0.3;
  for (int n = 0; n < 64; n += 7) {
    const SpMat a = problem.op().combine(problem.xi().row(n).transpose());
    CHECK(d.dot(a * d) > 0.0);
  }
}

TEST_CASE("e tensors agree when computed from either side") {
  EllipticProblem problem(small_config(2, 16));
  Vector a(problem.op().dim()), b(problem.op().dim());
  for (int i = 0; i < a.size(); ++i) {
    a[i] = std::sin(i + 0.5);
    b[i] = std::cos(2.0 * i);
  }
  for (const SpMat& k : problem.op().K)
    CHECK(a.dot(k * b) == doctest::Approx((k * a).dot(b)).epsilon(1e-12));
}

TEST_CASE("sample residual diagnostics") {
  EllipticProblem problem(small_config(2, 32));
  SeparatedSolution zero;
  CHECK(problem.sample_residual(zero, 5) == doctest::Approx(1.0).epsilon(1e-14));

  // substituting the exact per-sample solve gives zero residual
  const Vector exact = problem.solve_at(problem.xi().row(5).transpose());
  SeparatedSolution one;
  one.couples.push_back({Vector::Ones(32), exact});
  CHECK(problem.sample_residual(one, 5) <= 1e-10);
  CHECK_THROWS_AS(problem.sample_residual(zero, 99), std::invalid_argument);
}

TEST_CASE("converged expansion has small per-sample residuals") {
  EllipticConfig cfg = small_config(20, 4000, 200);
  EllipticProblem problem(cfg);
  const SeparatedSolution u = enrich_until_converged(problem, {1e-10, 1e-4, 30, 40});
  Vector residuals(100);
  for (int i = 0; i < 100; ++i) residuals[i] = problem.sample_residual(u, i * 17 % 4000);
  std::sort(residuals.begin(), residuals.end());
  CHECK(residuals[50] <= 1e-2);
}

TEST_CASE("enrichment with M = 0 recovers the deterministic solution in one couple") {
  EllipticProblem problem(small_config(0, 64, 100));
  const SeparatedSolution u = enrich_until_converged(problem, {1e-6, 1e-3, 10, 25});
  CHECK(u.term_count() == 1);
  CHECK(u.history.front().eps_global == 1.0);
  CHECK(u.history.back().eps_global <= 1e-6);

  const Vector reference = solve_sparse(problem.op().K[0], problem.op().F);
  const Vector rec = u.evaluate_at_sample(0);
  CHECK((rec - reference).cwiseAbs().maxCoeff() <= 1e-10 * reference.cwiseAbs().maxCoeff());
}

TEST_CASE("small-instance brute-force equivalence") {
  EllipticConfig cfg = small_config(2, 1000, 25);
  EllipticProblem problem(cfg);
  const SeparatedSolution u = enrich_until_converged(problem, {1e-8, 1e-3, 30, 25});

  Vector rel(problem.sample_count());
  for (int n = 0; n < problem.sample_count(); ++n) {
    const Vector direct = problem.solve_at(problem.xi().row(n).transpose());
    const Vector approx = u.evaluate_at_sample(n);
    rel[n] = std::sqrt(problem.space_dot(approx - direct, approx - direct) /
                       problem.space_dot(direct, direct));
  }
  std::sort(rel.begin(), rel.end());
  CHECK(rel[rel.size() / 2] <= 1e-3);
}

TEST_CASE("probe interpolation and probe samples") {
  EllipticProblem problem(small_config(2, 64, 100));
  const SeparatedSolution u = enrich_until_converged(problem, {1e-8, 1e-3, 20, 25});
  const Vector probes = problem.probe_samples(u);
  CHECK(probes.size() == 64);
  const Vector field = u.evaluate_at_sample(10);
  CHECK(probes[10] == doctest::Approx(problem.probe_value(field)).epsilon(1e-12));
}
