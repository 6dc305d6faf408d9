#include "sepspde/fdgrid.hpp"

#include <stdexcept>

namespace sepspde {

namespace {

void check(const SpaceTimeField& f) {
  if (f.grid.nt < 2 || f.grid.nx < 3)
    throw std::invalid_argument("space-time field: need nt >= 2 and nx >= 3");
  if (f.values.rows() != f.grid.nt || f.values.cols() != f.grid.nx)
    throw std::invalid_argument("space-time field: value table does not match grid");
}

}  // namespace

void ddx_row(const Eigen::Ref<const Vector>& row, double dx, Vector& out) {
  const Eigen::Index n = row.size();
  out.resize(n);
  out[0] = (-3.0 * row[0] + 4.0 * row[1] - row[2]) / (2.0 * dx);
  for (Eigen::Index i = 1; i + 1 < n; ++i) out[i] = (row[i + 1] - row[i - 1]) / (2.0 * dx);
  out[n - 1] = (3.0 * row[n - 1] - 4.0 * row[n - 2] + row[n - 3]) / (2.0 * dx);
}

SpaceTimeField ddx(const SpaceTimeField& f) {
  check(f);
  SpaceTimeField out{f.grid, Matrix(f.grid.nt, f.grid.nx)};
  const double dx = f.grid.dx();
  Vector row;
  for (int it = 0; it < f.grid.nt; ++it) {
    ddx_row(f.values.row(it).transpose(), dx, row);
    out.values.row(it) = row.transpose();
  }
  return out;
}

SpaceTimeField ddt(const SpaceTimeField& f) {
  check(f);
  SpaceTimeField out{f.grid, Matrix(f.grid.nt, f.grid.nx)};
  const double dt = f.grid.dt();
  const int nt = f.grid.nt;
  if (nt == 2) {  // first-order fallback for the degenerate two-level case
    out.values.row(0) = (f.values.row(1) - f.values.row(0)) / dt;
    out.values.row(1) = out.values.row(0);
    return out;
  }
  out.values.row(0) = (-3.0 * f.values.row(0) + 4.0 * f.values.row(1) - f.values.row(2)) / (2.0 * dt);
  for (int it = 1; it + 1 < nt; ++it)
    out.values.row(it) = (f.values.row(it + 1) - f.values.row(it - 1)) / (2.0 * dt);
  out.values.row(nt - 1) =
      (3.0 * f.values.row(nt - 1) - 4.0 * f.values.row(nt - 2) + f.values.row(nt - 3)) / (2.0 * dt);
  return out;
}

Vector trapezoid_weights(int n, double spacing) {
  Vector w = Vector::Constant(n, spacing);
  w[0] *= 0.5;
  w[n - 1] *= 0.5;
  return w;
}

double integrate_xt(const SpaceTimeField& f) {
  check(f);
  const Vector wt = trapezoid_weights(f.grid.nt, f.grid.dt());
  const Vector wx = trapezoid_weights(f.grid.nx, f.grid.dx());
  return wt.dot(f.values * wx);
}

double dot_xt(const SpaceTimeField& a, const SpaceTimeField& b) {
  check(a);
  if (a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols())
    throw std::invalid_argument("dot_xt: fields live on different grids");
  const Vector wt = trapezoid_weights(a.grid.nt, a.grid.dt());
  const Vector wx = trapezoid_weights(a.grid.nx, a.grid.dx());
  return wt.dot((a.values.array() * b.values.array()).matrix() * wx);
}

Vector flatten(const SpaceTimeField& f) {
  Vector out(f.grid.size());
  for (int it = 0; it < f.grid.nt; ++it)
    out.segment(static_cast<Eigen::Index>(it) * f.grid.nx, f.grid.nx) = f.values.row(it).transpose();
  return out;
}

SpaceTimeField unflatten(const SpaceTimeGrid& g, const Eigen::Ref<const Vector>& v) {
  if (v.size() != g.size()) throw std::invalid_argument("unflatten: size mismatch");
  SpaceTimeField f{g, Matrix(g.nt, g.nx)};
  for (int it = 0; it < g.nt; ++it)
    f.values.row(it) = v.segment(static_cast<Eigen::Index>(it) * g.nx, g.nx).transpose();
  return f;
}

}  // namespace sepspde
