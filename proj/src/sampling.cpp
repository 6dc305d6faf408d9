#include "sepspde/sampling.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sepspde {

namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z += kGamma;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based stream: value (seed, column, counter) -> u64, no carried state.
std::uint64_t stream_value(std::uint64_t seed, std::uint64_t column, std::uint64_t counter) {
  const std::uint64_t stream = mix64(seed ^ mix64(column + 0x632be59bd9b4e019ULL));
  return mix64(stream + counter * kGamma);
}

double to_unit_open(std::uint64_t bits) {  // [0, 1)
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

double to_unit_closed(std::uint64_t bits) {  // (0, 1]
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

}  // namespace

std::string to_string(Distribution d) {
  switch (d) {
    case Distribution::Uniform: return "uniform";
    case Distribution::StandardNormal: return "standard_normal";
  }
  return "unknown";
}

Distribution distribution_from_string(const std::string& name) {
  if (name == "uniform") return Distribution::Uniform;
  if (name == "standard_normal" || name == "normal" || name == "gaussian")
    return Distribution::StandardNormal;
  throw std::invalid_argument("unknown distribution: " + name);
}

Vector ensemble_column(Distribution dist, int n, int column, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("ensemble_column: n must be positive");
  if (column < 0) throw std::invalid_argument("ensemble_column: column must be nonnegative");
  Vector out(n);
  const auto col = static_cast<std::uint64_t>(column);
  if (dist == Distribution::Uniform) {
    for (int i = 0; i < n; ++i)
      out[i] = to_unit_open(stream_value(seed, col, static_cast<std::uint64_t>(i))) - 0.5;
  } else {
    // Box-Muller, cosine branch; two counters per variate.
    for (int i = 0; i < n; ++i) {
      const double u1 = to_unit_closed(stream_value(seed, col, 2 * static_cast<std::uint64_t>(i)));
      const double u2 = to_unit_open(stream_value(seed, col, 2 * static_cast<std::uint64_t>(i) + 1));
      out[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
  }
  return out;
}

SampleEnsemble generate(Distribution dist, int n, int m, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("generate: need at least 2 samples");
  if (m < 1) throw std::invalid_argument("generate: need at least 1 dimension");
  SampleEnsemble e;
  e.distribution = dist;
  e.seed = seed;
  e.samples.resize(n, m);
  for (int j = 0; j < m; ++j) e.samples.col(j) = ensemble_column(dist, n, j, seed);
  return e;
}

double expectation(const Eigen::Ref<const Vector>& values) {
  if (values.size() == 0) throw std::invalid_argument("expectation: empty sample list");
  return pairwise_mean(values);
}

double expectation_product(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b,
                           const Eigen::Ref<const Vector>& c) {
  if (a.size() == 0) throw std::invalid_argument("expectation_product: empty sample list");
  if (a.size() != b.size() || a.size() != c.size())
    throw std::invalid_argument("expectation_product: length mismatch");
  const double s = pairwise_sum(a.size(), [&](std::ptrdiff_t i) { return a[i] * b[i] * c[i]; });
  return s / static_cast<double>(a.size());
}

}  // namespace sepspde
