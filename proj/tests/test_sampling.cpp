#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "sepspde/sampling.hpp"

using namespace sepspde;

TEST_CASE("uniform ensemble stays inside [-0.5, 0.5]") {
  const SampleEnsemble e = generate(Distribution::Uniform, 100000, 100, 1);
  CHECK(e.samples.cwiseAbs().maxCoeff() <= 0.5);
  CHECK(e.count() == 100000);
  CHECK(e.dimension() == 100);
}

TEST_CASE("same seed reproduces bit-identical tables") {
  const SampleEnsemble a = generate(Distribution::StandardNormal, 4, 1, 123);
  const SampleEnsemble b = generate(Distribution::StandardNormal, 4, 1, 123);
  CHECK((a.samples - b.samples).cwiseAbs().maxCoeff() == 0.0);
  const SampleEnsemble c = generate(Distribution::StandardNormal, 4, 1, 124);
  CHECK((a.samples - c.samples).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("columns are pure functions of (seed, column)") {
  const SampleEnsemble small = generate(Distribution::Uniform, 1000, 3, 42);
  const SampleEnsemble wide = generate(Distribution::Uniform, 1000, 7, 42);
  for (int j = 0; j < 3; ++j) {
    CHECK((small.samples.col(j) - wide.samples.col(j)).cwiseAbs().maxCoeff() == 0.0);
    const Vector col = ensemble_column(Distribution::Uniform, 1000, j, 42);
    CHECK((col - small.samples.col(j)).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("uniform column mean obeys the CLT bound") {
  const SampleEnsemble e = generate(Distribution::Uniform, 100000, 1, 7);
  CHECK(std::abs(expectation(e.samples.col(0))) <= 0.003);  // 3 sigma/sqrt(N)
}

TEST_CASE("generate rejects empty shapes") {
  CHECK_THROWS_AS(generate(Distribution::Uniform, 0, 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate(Distribution::Uniform, 1, 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate(Distribution::Uniform, 10, 0, 1), std::invalid_argument);
}

TEST_CASE("expectation basics") {
  CHECK(expectation(Vector::Ones(357)) == 1.0);
  CHECK_THROWS_AS(expectation(Vector()), std::invalid_argument);

  const SampleEnsemble u = generate(Distribution::Uniform, 100000, 1, 11);
  CHECK(expectation(u.samples.col(0).array().square()) == doctest::Approx(1.0 / 12.0).epsilon(0.012));

  const SampleEnsemble g = generate(Distribution::StandardNormal, 100000, 1, 12);
  CHECK(expectation(g.samples.col(0).array().square()) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("expectation is linear to machine precision") {
  const SampleEnsemble e = generate(Distribution::StandardNormal, 4096, 2, 5);
  const Vector a = e.samples.col(0), b = e.samples.col(1);
  const double alpha = 0.37, beta = -2.25;
  const double lhs = expectation(alpha * a + beta * b);
  const double rhs = alpha * expectation(a) + beta * expectation(b);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
}

TEST_CASE("expectation_product") {
  CHECK(expectation_product(Vector::Constant(9, 2.0), Vector::Constant(9, 2.0),
                            Vector::Constant(9, 2.0)) == 8.0);
  CHECK_THROWS_AS(expectation_product(Vector::Ones(3), Vector::Ones(4), Vector::Ones(3)),
                  std::invalid_argument);

  const SampleEnsemble u = generate(Distribution::Uniform, 100000, 1, 3);
  const Vector ones = Vector::Ones(100000);
  CHECK(std::abs(expectation_product(ones, ones, u.samples.col(0))) <= 0.003);

  const SampleEnsemble g = generate(Distribution::StandardNormal, 100000, 1, 4);
  const Vector xi = g.samples.col(0);
  CHECK(std::abs(expectation_product(xi, xi, xi)) <= 0.03);  // odd Gaussian moment
}

TEST_CASE("expectation_product is symmetric in the first two arguments") {
  const SampleEnsemble e = generate(Distribution::StandardNormal, 513, 3, 8);
  const Vector a = e.samples.col(0), b = e.samples.col(1), c = e.samples.col(2);
  CHECK(expectation_product(a, b, c) == expectation_product(b, a, c));
}
