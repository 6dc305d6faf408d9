// Test-only reference computations, independent of the library's own
// solution paths.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

// Nystrom (midpoint rule) eigenvalues of exp(-|x-y|) on [0,1], descending.
inline Eigen::VectorXd nystrom_eigenvalues_1d(int n_points) {
  Eigen::MatrixXd k(n_points, n_points);
  for (int i = 0; i < n_points; ++i) {
    const double xi = (i + 0.5) / n_points;
    for (int j = 0; j < n_points; ++j) {
      const double xj = (j + 0.5) / n_points;
      k(i, j) = std::exp(-std::abs(xi - xj));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().reverse() / static_cast<double>(n_points);
}

// Nystrom eigenvalues of exp(-|x1-x2|-|y1-y2|) on the unit square, using an
// n_axis x n_axis midpoint grid; top `count` eigenvalues, descending.
inline Eigen::VectorXd nystrom_eigenvalues_2d(int n_axis, int count) {
  const int n = n_axis * n_axis;
  Eigen::MatrixXd k(n, n);
  std::vector<double> pts(n_axis);
  for (int i = 0; i < n_axis; ++i) pts[i] = (i + 0.5) / n_axis;
  for (int a = 0; a < n; ++a) {
    const double xa = pts[a % n_axis], ya = pts[a / n_axis];
    for (int b = 0; b <= a; ++b) {
      const double xb = pts[b % n_axis], yb = pts[b / n_axis];
      k(a, b) = k(b, a) = std::exp(-std::abs(xa - xb) - std::abs(ya - yb));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().tail(count).reverse() / static_cast<double>(n);
}

// Composite Simpson rule on [0,1] with n subintervals (n even).
inline double simpson_01(const std::function<double(double)>& f, int n) {
  const double h = 1.0 / n;
  double acc = f(0.0) + f(1.0);
  for (int i = 1; i < n; ++i) acc += f(i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

inline Eigen::VectorXd dense_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  return Eigen::FullPivLU<Eigen::MatrixXd>(a).solve(b);
}

}  // namespace oracles
