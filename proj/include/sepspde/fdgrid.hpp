#pragma once

#include "sepspde/math.hpp"

namespace sepspde {

/// Uniform space-time grid: rows are time levels, columns space nodes.
struct SpaceTimeGrid {
  int nt = 101;
  int nx = 51;
  double t_max = 1.0;
  double x_max = 2.0;

  double dt() const { return t_max / (nt - 1); }
  double dx() const { return x_max / (nx - 1); }
  double t(int it) const { return it * dt(); }
  double x(int ix) const { return ix * dx(); }
  int size() const { return nt * nx; }
};

struct SpaceTimeField {
  SpaceTimeGrid grid;
  Matrix values;  // nt x nx

  static SpaceTimeField zero(const SpaceTimeGrid& g) { return {g, Matrix::Zero(g.nt, g.nx)}; }
};

/// Central differences; second-order one-sided stencils at the edges.
SpaceTimeField ddx(const SpaceTimeField& f);
SpaceTimeField ddt(const SpaceTimeField& f);

/// Trapezoidal rule in both directions.
double integrate_xt(const SpaceTimeField& f);

/// Trapezoidal space-time inner product of two fields on one grid.
double dot_xt(const SpaceTimeField& a, const SpaceTimeField& b);

/// Row-major (time-major) flattening used to exchange fields with the
/// separated-solution driver.
Vector flatten(const SpaceTimeField& f);
SpaceTimeField unflatten(const SpaceTimeGrid& g, const Eigen::Ref<const Vector>& v);

/// Second-order derivative of one row (time level) with the same stencils.
void ddx_row(const Eigen::Ref<const Vector>& row, double dx, Vector& out);

/// Trapezoid weights for a uniform axis.
Vector trapezoid_weights(int n, double spacing);

}  // namespace sepspde
