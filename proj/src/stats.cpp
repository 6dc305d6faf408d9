#include "sepspde/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace sepspde {

namespace {

struct Spread {
  double mean, stddev, iqr;
};

Spread sample_spread(const Eigen::Ref<const Vector>& samples) {
  Spread s;
  s.mean = pairwise_mean(samples);
  const Vector centered = samples.array() - s.mean;
  s.stddev = std::sqrt(
      pairwise_sum(centered.size(), [&](std::ptrdiff_t i) { return centered[i] * centered[i]; }) /
      std::max<double>(1.0, static_cast<double>(samples.size() - 1)));
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto quantile = [&](double q) {
    const double pos = q * (sorted.size() - 1);
    const size_t lo = static_cast<size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    return lo + 1 < sorted.size() ? (1.0 - frac) * sorted[lo] + frac * sorted[lo + 1] : sorted[lo];
  };
  s.iqr = quantile(0.75) - quantile(0.25);
  return s;
}

}  // namespace

Vector kde_grid(const Eigen::Ref<const Vector>& samples, int points) {
  if (points < 2) throw std::invalid_argument("kde_grid: need at least 2 points");
  const Spread s = sample_spread(samples);
  const double half = 6.0 * (s.stddev > 0.0 ? s.stddev : std::max(1e-12, std::abs(s.mean)));
  return Vector::LinSpaced(points, s.mean - half, s.mean + half);
}

DensityCurve kde(const Eigen::Ref<const Vector>& samples, const Eigen::Ref<const Vector>& grid) {
  if (samples.size() < 100) throw std::invalid_argument("kde: need at least 100 samples");
  if (grid.size() < 2) throw std::invalid_argument("kde: need at least 2 grid points");
  DensityCurve curve;
  curve.grid = grid;
  const Spread s = sample_spread(samples);
  const double sigma = s.iqr > 0.0 ? std::min(s.stddev, s.iqr / 1.34) : s.stddev;
  if (!(sigma > 0.0)) {
    curve.point_mass = true;
    curve.point_location = s.mean;
    curve.density = Vector::Zero(grid.size());
    return curve;
  }
  const double bandwidth =
      0.9 * sigma * std::pow(static_cast<double>(samples.size()), -0.2);  // Silverman
  const double norm = 1.0 / (static_cast<double>(samples.size()) * bandwidth *
                             std::sqrt(2.0 * std::numbers::pi));
  curve.density.resize(grid.size());
  for (Eigen::Index g = 0; g < grid.size(); ++g) {
    const double x = grid[g];
    curve.density[g] =
        norm * pairwise_sum(samples.size(), [&](std::ptrdiff_t i) {
          const double z = (x - samples[i]) / bandwidth;
          return std::exp(-0.5 * z * z);
        });
  }
  return curve;
}

double pdf_l1_distance(const DensityCurve& a, const DensityCurve& b) {
  if (a.point_mass || b.point_mass) {
    if (a.point_mass && b.point_mass) return a.point_location == b.point_location ? 0.0 : 2.0;
    return 2.0;
  }
  if (a.grid.size() != b.grid.size() || (a.grid - b.grid).cwiseAbs().maxCoeff() != 0.0)
    throw std::invalid_argument("pdf_l1_distance: curves must share one grid");
  const Eigen::Index n = a.grid.size();
  double acc = 0.0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double h = a.grid[i + 1] - a.grid[i];
    acc += 0.5 * h * (std::abs(a.density[i] - b.density[i]) +
                      std::abs(a.density[i + 1] - b.density[i + 1]));
  }
  return acc;
}

void write_curve_csv(std::ostream& out, const DensityCurve& curve) {
  char buf[40];
  out << "value,density\n";
  for (Eigen::Index i = 0; i < curve.grid.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", curve.grid[i]);
    out << buf << ",";
    std::snprintf(buf, sizeof buf, "%.17g", curve.density[i]);
    out << buf << "\n";
  }
}

}  // namespace sepspde
