#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <iosfwd>
#include <memory>
#include <vector>

#include "sepspde/math.hpp"

namespace sepspde {

using SpMat = Eigen::SparseMatrix<double>;

/// Conforming P1 triangulation. Triangles are positively oriented.
struct TriMesh {
  Eigen::Matrix<double, Eigen::Dynamic, 2> nodes;
  Eigen::Matrix<int, Eigen::Dynamic, 3> triangles;
  std::vector<int> boundary_nodes;   // sorted
  std::vector<int> interior_nodes;   // sorted
  std::vector<int> interior_index;   // node -> interior slot, or -1 on the boundary

  int node_count() const { return static_cast<int>(nodes.rows()); }
  int triangle_count() const { return static_cast<int>(triangles.rows()); }
  int interior_count() const { return static_cast<int>(interior_nodes.size()); }
  double triangle_area(int t) const;
  double total_area() const;
};

/// Structured triangulation of [0,1]^2 with about target_nodes nodes.
TriMesh mesh_square(int target_nodes);

/// Ring ("spider web") triangulation of the unit disk with about target_nodes nodes.
TriMesh mesh_disk(int target_nodes);

void write_mesh(std::ostream& out, const TriMesh& mesh);
TriMesh read_mesh(std::istream& in);

/// Stiffness matrix for -div(kappa grad u) with P1 nodal coefficient kappa.
SpMat assemble_stiffness(const TriMesh& mesh, const Vector& kappa_nodal);

/// Consistent P1 mass matrix.
SpMat assemble_mass(const TriMesh& mesh);

/// Row sums of the consistent mass matrix (vertex-rule quadrature weights).
Vector lumped_mass(const TriMesh& mesh);

/// Load vector for nodal data f: integral of f * phi_i.
Vector assemble_load(const TriMesh& mesh, const Vector& f_nodal);

SpMat restrict_interior(const TriMesh& mesh, const SpMat& full);
Vector restrict_interior(const TriMesh& mesh, const Vector& full);
Vector expand_with_boundary_zeros(const TriMesh& mesh, const Vector& interior);

class KlBasis;  // klexp.hpp

/// Affine family K(theta) = K_0 + sum_j xi_j K_j plus deterministic load,
/// reduced to the interior (homogeneous Dirichlet data eliminated
/// symmetrically). All K_j share one sparsity pattern.
struct StochasticOperator {
  std::vector<SpMat> K;  // K_0 .. K_M
  Vector F;
  SpMat mass_interior;

  int dim() const { return static_cast<int>(F.size()); }
  int term_count() const { return static_cast<int>(K.size()); }  // M + 1

  /// values(K_0) + sum_j xi[j] * values(K_j) over the shared pattern.
  SpMat combine(const Eigen::Ref<const Vector>& xi) const;

  /// sum_j w[j] * values(K_j), w of length M + 1.
  SpMat combine_weighted(const Eigen::Ref<const Vector>& w) const;
};

/// K_0: diffusion with constant coefficient mean_diffusion plus reaction;
/// K_j (j >= 1): diffusion with coefficient fluctuation_scale * nu_j * c_j(x,y);
/// F: load for the constant right-hand side.
StochasticOperator assemble_affine_operator(const TriMesh& mesh, const KlBasis& kl,
                                            double reaction, double load,
                                            double mean_diffusion = 50.0,
                                            double fluctuation_scale = 0.3);

/// Direct sparse SPD solver with pattern reuse across refactorizations.
class SparseSolver {
 public:
  explicit SparseSolver(const SpMat& pattern);
  void factorize(const SpMat& mat);
  Vector solve(const Eigen::Ref<const Vector>& rhs) const;

 private:
  Eigen::SimplicialLDLT<SpMat> ldlt_;
};

/// One-shot direct solve; relative residual is checked to 1e-10.
Vector solve_sparse(const SpMat& mat, const Eigen::Ref<const Vector>& rhs);

/// Barycentric interpolation of a full nodal field at (x, y).
double interpolate_at(const TriMesh& mesh, const Eigen::Ref<const Vector>& nodal, double x,
                      double y);

}  // namespace sepspde
