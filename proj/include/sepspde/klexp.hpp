#pragma once

#include <span>
#include <utility>
#include <vector>

#include "sepspde/math.hpp"

namespace sepspde {

struct TriMesh;

/// One eigenpair of the 1D kernel exp(-|x-y|) on [0,1]. Even modes are
/// cosines about x = 1/2 (omega tan(omega/2) = 1), odd modes are sines
/// (tan(omega/2) = -omega); eigenvalue 2 / (1 + omega^2).
struct Kl1dMode {
  double omega = 0.0;
  double lambda = 0.0;
  bool even = true;

  /// L2-normalized eigenfunction value on [0,1].
  double evaluate(double x) const;
};

/// The `count` largest 1D eigenpairs, eigenvalues strictly decreasing.
std::vector<Kl1dMode> exp_kernel_eigenpairs_1d(int count);

/// Tensor-product KL basis of exp(-|x1-x2|-|y1-y2|) on the unit square.
///
/// nu[j]^2 is the j-th 2D eigenvalue (product of two 1D eigenvalues), sorted
/// descending with lexicographic (ix, iy) tie-break. `modes` holds the nodal
/// mode fields, rescaled to unit discrete (mass matrix) L2 norm. The analytic
/// modes are exactly L2-orthonormal on the continuum square; `evaluate_raw`
/// gives that representation with the same sign convention as `modes`.
class KlBasis {
 public:
  std::vector<double> nu;
  Matrix modes;                                   // nodes x M
  std::vector<std::pair<int, int>> tensor_index;  // (ix, iy) per mode
  std::vector<double> sign;                       // first nonzero nodal value positive
  std::vector<Kl1dMode> modes_1d;

  int mode_count() const { return static_cast<int>(nu.size()); }

  double evaluate_raw(int j, double x, double y) const;
};

KlBasis exp_kernel_eigenpairs(const TriMesh& mesh, int m_count);

/// Truncated KL series of Brownian-motion forcing with sigma_f = 0.2:
/// (sqrt(2)/5) sum_j xi_j sin((j-1/2) pi t) / ((j-1/2) pi).
double brownian_force_eval(std::span<const double> xi_row, double t);

/// Stochastic initial displacement sqrt(2) sum_j xi_j sin(j pi r).
double wave_ic_eval(std::span<const double> xi_row, double r);

}  // namespace sepspde
