#pragma once

#include <cstdint>
#include <string>

#include "sepspde/math.hpp"

namespace sepspde {

enum class Distribution {
  Uniform,         // uniform on [-0.5, 0.5]
  StandardNormal,  // N(0, 1)
};

std::string to_string(Distribution d);
Distribution distribution_from_string(const std::string& name);

/// N x M table of independent realizations. Column j is a pure function of
/// (seed, j), so extending M leaves existing columns untouched.
struct SampleEnsemble {
  Matrix samples;  // N x M
  Distribution distribution = Distribution::Uniform;
  std::uint64_t seed = 0;

  int count() const { return static_cast<int>(samples.rows()); }      // N
  int dimension() const { return static_cast<int>(samples.cols()); }  // M
};

/// One column of the ensemble for (seed, column). Counter-based: entry n is a
/// pure function of (seed, column, n).
Vector ensemble_column(Distribution dist, int n, int column, std::uint64_t seed);

SampleEnsemble generate(Distribution dist, int n, int m, std::uint64_t seed);

/// Sample mean over the ensemble (pairwise summation).
double expectation(const Eigen::Ref<const Vector>& values);

/// Sample mean of the elementwise triple product a.*b.*c.
double expectation_product(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b,
                           const Eigen::Ref<const Vector>& c);

}  // namespace sepspde
