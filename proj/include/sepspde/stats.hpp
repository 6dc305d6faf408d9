#pragma once

#include <iosfwd>

#include "sepspde/math.hpp"

namespace sepspde {

/// Empirical density on a fixed evaluation grid. For samples without spread
/// the curve degenerates to a point-mass marker instead of a division by a
/// zero bandwidth.
struct DensityCurve {
  Vector grid;
  Vector density;
  bool point_mass = false;
  double point_location = 0.0;
};

/// Evaluation grid spanning mean +- 6 std of the samples.
Vector kde_grid(const Eigen::Ref<const Vector>& samples, int points = 512);

/// Gaussian kernel density with Silverman bandwidth on the given grid.
DensityCurve kde(const Eigen::Ref<const Vector>& samples, const Eigen::Ref<const Vector>& grid);

/// Trapezoidal integral of |p_a - p_b| over the shared grid; in [0, 2].
double pdf_l1_distance(const DensityCurve& a, const DensityCurve& b);

/// Two-column CSV (value, density).
void write_curve_csv(std::ostream& out, const DensityCurve& curve);

}  // namespace sepspde
