#include "sepspde/fem2d.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "sepspde/errors.hpp"
#include "sepspde/klexp.hpp"

namespace sepspde {

namespace {

void finalize_topology(TriMesh& mesh, const std::vector<bool>& on_boundary) {
  const int n = mesh.node_count();
  mesh.boundary_nodes.clear();
  mesh.interior_nodes.clear();
  mesh.interior_index.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    if (on_boundary[i]) {
      mesh.boundary_nodes.push_back(i);
    } else {
      mesh.interior_index[i] = static_cast<int>(mesh.interior_nodes.size());
      mesh.interior_nodes.push_back(i);
    }
  }
  // enforce positive orientation
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    if (mesh.triangle_area(t) < 0.0) std::swap(mesh.triangles(t, 1), mesh.triangles(t, 2));
    if (mesh.triangle_area(t) <= 0.0) throw Error("mesh: degenerate triangle");
  }
}

struct ElementGeometry {
  double area;
  double bx[3], by[3];  // P1 gradient components: grad phi_i = (bx[i], by[i])
};

ElementGeometry element_geometry(const TriMesh& mesh, int t) {
  const int i0 = mesh.triangles(t, 0), i1 = mesh.triangles(t, 1), i2 = mesh.triangles(t, 2);
  const double x0 = mesh.nodes(i0, 0), y0 = mesh.nodes(i0, 1);
  const double x1 = mesh.nodes(i1, 0), y1 = mesh.nodes(i1, 1);
  const double x2 = mesh.nodes(i2, 0), y2 = mesh.nodes(i2, 1);
  ElementGeometry g;
  const double det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0);
  g.area = 0.5 * det;
  g.bx[0] = (y1 - y2) / det;
  g.bx[1] = (y2 - y0) / det;
  g.bx[2] = (y0 - y1) / det;
  g.by[0] = (x2 - x1) / det;
  g.by[1] = (x0 - x2) / det;
  g.by[2] = (x1 - x0) / det;
  return g;
}

}  // namespace

double TriMesh::triangle_area(int t) const {
  const int i0 = triangles(t, 0), i1 = triangles(t, 1), i2 = triangles(t, 2);
  return 0.5 * ((nodes(i1, 0) - nodes(i0, 0)) * (nodes(i2, 1) - nodes(i0, 1)) -
                (nodes(i2, 0) - nodes(i0, 0)) * (nodes(i1, 1) - nodes(i0, 1)));
}

double TriMesh::total_area() const {
  double s = 0.0;
  for (int t = 0; t < triangle_count(); ++t) s += triangle_area(t);
  return s;
}

TriMesh mesh_square(int target_nodes) {
  if (target_nodes < 4) throw std::invalid_argument("mesh_square: target_nodes must be >= 4");
  const int n = std::max(2, static_cast<int>(std::lround(std::sqrt(static_cast<double>(target_nodes)))));
  TriMesh mesh;
  mesh.nodes.resize(n * n, 2);
  const double h = 1.0 / (n - 1);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      mesh.nodes(j * n + i, 0) = i * h;
      mesh.nodes(j * n + i, 1) = j * h;
    }
  mesh.triangles.resize(2 * (n - 1) * (n - 1), 3);
  int t = 0;
  for (int j = 0; j + 1 < n; ++j)
    for (int i = 0; i + 1 < n; ++i) {
      const int a = j * n + i, b = j * n + i + 1, c = (j + 1) * n + i + 1, d = (j + 1) * n + i;
      mesh.triangles.row(t++) << a, b, c;
      mesh.triangles.row(t++) << a, c, d;
    }
  std::vector<bool> on_boundary(n * n, false);
  for (int k = 0; k < n * n; ++k) {
    const double x = mesh.nodes(k, 0), y = mesh.nodes(k, 1);
    on_boundary[k] = x < 1e-14 || x > 1.0 - 1e-14 || y < 1e-14 || y > 1.0 - 1e-14;
  }
  finalize_topology(mesh, on_boundary);
  return mesh;
}

TriMesh mesh_disk(int target_nodes) {
  if (target_nodes < 4) throw std::invalid_argument("mesh_disk: target_nodes must be >= 4");
  // rings of 6i nodes at radius i/nr: 3 nr (nr+1) + 1 nodes in total
  int nr = static_cast<int>(std::lround((-3.0 + std::sqrt(12.0 * target_nodes - 3.0)) / 6.0));
  nr = std::max(1, nr);
  TriMesh mesh;
  const int n_nodes = 3 * nr * (nr + 1) + 1;
  mesh.nodes.resize(n_nodes, 2);
  std::vector<int> ring_start(nr + 1, 0);
  mesh.nodes(0, 0) = 0.0;
  mesh.nodes(0, 1) = 0.0;
  int id = 1;
  for (int i = 1; i <= nr; ++i) {
    ring_start[i] = id;
    const int m = 6 * i;
    const double r = static_cast<double>(i) / nr;
    for (int k = 0; k < m; ++k) {
      const double phi = 2.0 * std::numbers::pi * k / m;
      mesh.nodes(id, 0) = r * std::cos(phi);
      mesh.nodes(id, 1) = r * std::sin(phi);
      ++id;
    }
  }
  std::vector<Eigen::Vector3i> tris;
  tris.reserve(6 * nr * nr);
  // innermost fan
  for (int k = 0; k < 6; ++k)
    tris.emplace_back(Eigen::Vector3i(0, ring_start[1] + k, ring_start[1] + (k + 1) % 6));
  // annuli: merge the two rings by angular sweep
  for (int i = 2; i <= nr; ++i) {
    const int n_in = 6 * (i - 1), n_out = 6 * i;
    const int in0 = ring_start[i - 1], out0 = ring_start[i];
    int a = 0, b = 0;  // consumed steps on the inner/outer ring
    const double da = 1.0 / n_in, db = 1.0 / n_out;
    while (a < n_in || b < n_out) {
      const int in_cur = in0 + a % n_in, out_cur = out0 + b % n_out;
      const bool advance_outer =
          b < n_out && (a == n_in || (b + 1) * db <= (a + 1) * da + 1e-12);
      if (advance_outer) {
        tris.emplace_back(Eigen::Vector3i(in_cur, out_cur, out0 + (b + 1) % n_out));
        ++b;
      } else {
        tris.emplace_back(Eigen::Vector3i(in_cur, out0 + b % n_out, in0 + (a + 1) % n_in));
        ++a;
      }
    }
  }
  mesh.triangles.resize(static_cast<int>(tris.size()), 3);
  for (size_t t = 0; t < tris.size(); ++t) mesh.triangles.row(static_cast<int>(t)) = tris[t];
  std::vector<bool> on_boundary(n_nodes, false);
  for (int k = ring_start[nr]; k < n_nodes; ++k) on_boundary[k] = true;
  finalize_topology(mesh, on_boundary);
  return mesh;
}

void write_mesh(std::ostream& out, const TriMesh& mesh) {
  out << "nodes " << mesh.node_count() << "\n";
  out.precision(17);
  for (int i = 0; i < mesh.node_count(); ++i)
    out << mesh.nodes(i, 0) << " " << mesh.nodes(i, 1) << "\n";
  out << "triangles " << mesh.triangle_count() << "\n";
  for (int t = 0; t < mesh.triangle_count(); ++t)
    out << mesh.triangles(t, 0) << " " << mesh.triangles(t, 1) << " " << mesh.triangles(t, 2)
        << "\n";
  out << "boundary " << mesh.boundary_nodes.size() << "\n";
  for (int b : mesh.boundary_nodes) out << b << "\n";
}

TriMesh read_mesh(std::istream& in) {
  TriMesh mesh;
  std::string tag;
  int n = 0;
  if (!(in >> tag >> n) || tag != "nodes") throw std::invalid_argument("read_mesh: bad node header");
  mesh.nodes.resize(n, 2);
  for (int i = 0; i < n; ++i)
    if (!(in >> mesh.nodes(i, 0) >> mesh.nodes(i, 1)))
      throw std::invalid_argument("read_mesh: bad node record");
  int t = 0;
  if (!(in >> tag >> t) || tag != "triangles")
    throw std::invalid_argument("read_mesh: bad triangle header");
  mesh.triangles.resize(t, 3);
  for (int i = 0; i < t; ++i)
    if (!(in >> mesh.triangles(i, 0) >> mesh.triangles(i, 1) >> mesh.triangles(i, 2)))
      throw std::invalid_argument("read_mesh: bad triangle record");
  int b = 0;
  if (!(in >> tag >> b) || tag != "boundary")
    throw std::invalid_argument("read_mesh: bad boundary header");
  std::vector<bool> on_boundary(n, false);
  for (int i = 0; i < b; ++i) {
    int idx;
    if (!(in >> idx)) throw std::invalid_argument("read_mesh: bad boundary record");
    on_boundary[idx] = true;
  }
  finalize_topology(mesh, on_boundary);
  return mesh;
}

SpMat assemble_stiffness(const TriMesh& mesh, const Vector& kappa_nodal) {
  if (kappa_nodal.size() != mesh.node_count())
    throw std::invalid_argument("assemble_stiffness: coefficient size mismatch");
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(9 * mesh.triangle_count());
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto g = element_geometry(mesh, t);
    const int idx[3] = {mesh.triangles(t, 0), mesh.triangles(t, 1), mesh.triangles(t, 2)};
    // P1 coefficient: exact element integral is area * vertex mean
    const double kbar = (kappa_nodal[idx[0]] + kappa_nodal[idx[1]] + kappa_nodal[idx[2]]) / 3.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const double v = kbar * g.area * (g.bx[a] * g.bx[b] + g.by[a] * g.by[b]);
        trips.emplace_back(idx[a], idx[b], v);
      }
  }
  SpMat mat(mesh.node_count(), mesh.node_count());
  mat.setFromTriplets(trips.begin(), trips.end());
  return mat;
}

SpMat assemble_mass(const TriMesh& mesh) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(9 * mesh.triangle_count());
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const double area = mesh.triangle_area(t);
    const int idx[3] = {mesh.triangles(t, 0), mesh.triangles(t, 1), mesh.triangles(t, 2)};
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        trips.emplace_back(idx[a], idx[b], area / 12.0 * (a == b ? 2.0 : 1.0));
  }
  SpMat mat(mesh.node_count(), mesh.node_count());
  mat.setFromTriplets(trips.begin(), trips.end());
  return mat;
}

Vector lumped_mass(const TriMesh& mesh) {
  Vector m = Vector::Zero(mesh.node_count());
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const double third = mesh.triangle_area(t) / 3.0;
    for (int a = 0; a < 3; ++a) m[mesh.triangles(t, a)] += third;
  }
  return m;
}

Vector assemble_load(const TriMesh& mesh, const Vector& f_nodal) {
  if (f_nodal.size() != mesh.node_count())
    throw std::invalid_argument("assemble_load: data size mismatch");
  Vector load = Vector::Zero(mesh.node_count());
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const double area = mesh.triangle_area(t);
    const int idx[3] = {mesh.triangles(t, 0), mesh.triangles(t, 1), mesh.triangles(t, 2)};
    for (int a = 0; a < 3; ++a) {
      const double fa = f_nodal[idx[a]], fb = f_nodal[idx[(a + 1) % 3]],
                   fc = f_nodal[idx[(a + 2) % 3]];
      load[idx[a]] += area / 12.0 * (2.0 * fa + fb + fc);
    }
  }
  return load;
}

SpMat restrict_interior(const TriMesh& mesh, const SpMat& full) {
  const int ni = mesh.interior_count();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(full.nonZeros());
  for (int col = 0; col < full.outerSize(); ++col) {
    const int jc = mesh.interior_index[col];
    if (jc < 0) continue;
    for (SpMat::InnerIterator it(full, col); it; ++it) {
      const int jr = mesh.interior_index[it.row()];
      if (jr >= 0) trips.emplace_back(jr, jc, it.value());
    }
  }
  SpMat out(ni, ni);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

Vector restrict_interior(const TriMesh& mesh, const Vector& full) {
  Vector out(mesh.interior_count());
  for (size_t i = 0; i < mesh.interior_nodes.size(); ++i) out[i] = full[mesh.interior_nodes[i]];
  return out;
}

Vector expand_with_boundary_zeros(const TriMesh& mesh, const Vector& interior) {
  Vector out = Vector::Zero(mesh.node_count());
  for (size_t i = 0; i < mesh.interior_nodes.size(); ++i) out[mesh.interior_nodes[i]] = interior[i];
  return out;
}

SpMat StochasticOperator::combine(const Eigen::Ref<const Vector>& xi) const {
  if (xi.size() + 1 != static_cast<Eigen::Index>(K.size()))
    throw std::invalid_argument("combine: xi size must be M");
  SpMat out = K[0];
  double* vals = out.valuePtr();
  const auto nnz = out.nonZeros();
  for (size_t j = 1; j < K.size(); ++j) {
    const double w = xi[static_cast<Eigen::Index>(j) - 1];
    const double* src = K[j].valuePtr();
    for (Eigen::Index q = 0; q < nnz; ++q) vals[q] += w * src[q];
  }
  return out;
}

SpMat StochasticOperator::combine_weighted(const Eigen::Ref<const Vector>& w) const {
  if (w.size() != static_cast<Eigen::Index>(K.size()))
    throw std::invalid_argument("combine_weighted: weight size must be M + 1");
  SpMat out = K[0];
  double* vals = out.valuePtr();
  const auto nnz = out.nonZeros();
  for (Eigen::Index q = 0; q < nnz; ++q) vals[q] *= w[0];
  for (size_t j = 1; j < K.size(); ++j) {
    const double* src = K[j].valuePtr();
    for (Eigen::Index q = 0; q < nnz; ++q) vals[q] += w[static_cast<Eigen::Index>(j)] * src[q];
  }
  return out;
}

StochasticOperator assemble_affine_operator(const TriMesh& mesh, const KlBasis& kl,
                                            double reaction, double load, double mean_diffusion,
                                            double fluctuation_scale) {
  if (kl.mode_count() > 0 && kl.modes.rows() != mesh.node_count())
    throw std::invalid_argument("assemble_affine_operator: basis and mesh do not match");
  const int n = mesh.node_count();
  StochasticOperator op;
  const SpMat mass = assemble_mass(mesh);
  {
    SpMat k0 = assemble_stiffness(mesh, Vector::Constant(n, mean_diffusion));
    k0 = k0 + SpMat(reaction * mass);
    op.K.push_back(restrict_interior(mesh, k0));
  }
  for (int j = 0; j < kl.mode_count(); ++j) {
    const Vector coeff = fluctuation_scale * kl.nu[j] * kl.modes.col(j);
    op.K.push_back(restrict_interior(mesh, assemble_stiffness(mesh, coeff)));
  }
  op.F = restrict_interior(mesh, assemble_load(mesh, Vector::Constant(n, load)));
  op.mass_interior = restrict_interior(mesh, mass);
  // same element loop everywhere: the compressed patterns must agree
  for (size_t j = 1; j < op.K.size(); ++j)
    if (op.K[j].nonZeros() != op.K[0].nonZeros())
      throw Error("assemble_affine_operator: operators do not share a sparsity pattern");
  return op;
}

SparseSolver::SparseSolver(const SpMat& pattern) {
  ldlt_.analyzePattern(pattern);
}

void SparseSolver::factorize(const SpMat& mat) {
  ldlt_.factorize(mat);
  if (ldlt_.info() != Eigen::Success) {
    const Vector d = ldlt_.vectorD();
    std::ostringstream msg;
    msg << "sparse factorization failed; diag(D) range [" << d.minCoeff() << ", " << d.maxCoeff()
        << "]";
    throw SolveError(msg.str());
  }
}

Vector SparseSolver::solve(const Eigen::Ref<const Vector>& rhs) const {
  return ldlt_.solve(rhs);
}

Vector solve_sparse(const SpMat& mat, const Eigen::Ref<const Vector>& rhs) {
  if (mat.rows() != mat.cols() || mat.rows() != rhs.size())
    throw std::invalid_argument("solve_sparse: dimension mismatch");
  SparseSolver solver(mat);
  solver.factorize(mat);
  Vector x = solver.solve(rhs);
  const double rhs_norm = rhs.norm();
  const double resid = (mat * x - rhs).norm();
  if (resid > 1e-10 * (rhs_norm > 0.0 ? rhs_norm : 1.0)) {
    std::ostringstream msg;
    msg << "solve_sparse: residual " << resid / (rhs_norm > 0.0 ? rhs_norm : 1.0)
        << " exceeds 1e-10 (near-singular system)";
    throw SolveError(msg.str());
  }
  return x;
}

double interpolate_at(const TriMesh& mesh, const Eigen::Ref<const Vector>& nodal, double x,
                      double y) {
  if (nodal.size() != mesh.node_count())
    throw std::invalid_argument("interpolate_at: field size mismatch");
  constexpr double tol = -1e-12;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const int i0 = mesh.triangles(t, 0), i1 = mesh.triangles(t, 1), i2 = mesh.triangles(t, 2);
    const double x0 = mesh.nodes(i0, 0), y0 = mesh.nodes(i0, 1);
    const double det = (mesh.nodes(i1, 0) - x0) * (mesh.nodes(i2, 1) - y0) -
                       (mesh.nodes(i2, 0) - x0) * (mesh.nodes(i1, 1) - y0);
    const double l1 = ((x - x0) * (mesh.nodes(i2, 1) - y0) - (mesh.nodes(i2, 0) - x0) * (y - y0)) / det;
    const double l2 = ((mesh.nodes(i1, 0) - x0) * (y - y0) - (x - x0) * (mesh.nodes(i1, 1) - y0)) / det;
    const double l0 = 1.0 - l1 - l2;
    if (l0 >= tol && l1 >= tol && l2 >= tol)
      return l0 * nodal[i0] + l1 * nodal[i1] + l2 * nodal[i2];
  }
  throw std::invalid_argument("interpolate_at: point outside mesh");
}

}  // namespace sepspde
