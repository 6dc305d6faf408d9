#include "sepspde/elliptic.hpp"

#include <cmath>
#include <stdexcept>

namespace sepspde {

EllipticProblem::EllipticProblem(const EllipticConfig& config) : config_(config), n_(config.samples) {
  if (config.samples < 2) throw std::invalid_argument("elliptic: need at least 2 samples");
  if (config.dimension < 0) throw std::invalid_argument("elliptic: dimension must be >= 0");
  mesh_ = mesh_square(config.mesh_nodes);
  if (config.dimension >= 1) {
    kl_ = exp_kernel_eigenpairs(mesh_, config.dimension);
    xi_ = generate(Distribution::Uniform, config.samples, config.dimension, config.seed).samples;
  } else {
    xi_.resize(config.samples, 0);
  }
  op_ = assemble_affine_operator(mesh_, kl_, config.reaction, config.load, config.mean_diffusion,
                                 config.fluctuation_scale);
  solver_ = std::make_unique<SparseSolver>(op_.K[0]);
}

EllipticProblem::EllipticProblem(const EllipticConfig& config, Matrix xi_table)
    : config_(config), n_(static_cast<int>(xi_table.rows())) {
  if (n_ < 2) throw std::invalid_argument("elliptic: need at least 2 samples");
  if (xi_table.cols() != config.dimension)
    throw std::invalid_argument("elliptic: realization table does not match dimension");
  mesh_ = mesh_square(config.mesh_nodes);
  if (config.dimension >= 1) kl_ = exp_kernel_eigenpairs(mesh_, config.dimension);
  xi_ = std::move(xi_table);
  op_ = assemble_affine_operator(mesh_, kl_, config.reaction, config.load, config.mean_diffusion,
                                 config.fluctuation_scale);
  solver_ = std::make_unique<SparseSolver>(op_.K[0]);
}

double EllipticProblem::space_dot(const Vector& a, const Vector& b) const {
  return a.dot(op_.mass_interior * b);
}

Vector EllipticProblem::deterministic_update(const Vector& lambda, const SeparatedSolution& prev) {
  const int m = op_.term_count() - 1;
  if (lambda.size() != n_) throw std::invalid_argument("deterministic_update: lambda size mismatch");
  const Vector w = lambda.array().square();
  Vector c_kk(m + 1);
  c_kk[0] = pairwise_mean(w);
  if (c_kk[0] == 0.0)
    throw DegenerateError("elliptic deterministic_update: lambda samples are all zero");
  if (m > 0) c_kk.tail(m) = xi_.transpose() * w / static_cast<double>(n_);

  const SpMat ktilde = op_.combine_weighted(c_kk);

  Vector rhs = pairwise_mean(lambda) * op_.F;
  const int k_prev = prev.term_count();
  if (k_prev > 0) {
    // c_kij = E{lambda lambda_i xi_j}; subtract sum_j sum_i c_kij K_j d_i
    Matrix c(k_prev, m + 1);
    for (int i = 0; i < k_prev; ++i) {
      const Vector t = lambda.cwiseProduct(prev.couples[i].lambda);
      c(i, 0) = pairwise_mean(t);
      if (m > 0) c.row(i).tail(m) = (xi_.transpose() * t).transpose() / static_cast<double>(n_);
    }
    Vector y(op_.dim());
    for (int j = 0; j <= m; ++j) {
      y.setZero();
      for (int i = 0; i < k_prev; ++i) y += c(i, j) * prev.couples[i].d;
      rhs -= op_.K[static_cast<size_t>(j)] * y;
    }
  }

  solver_->factorize(ktilde);
  return solver_->solve(rhs);
}

Vector EllipticProblem::stochastic_update(const Vector& d, const SeparatedSolution& prev,
                                          const Vector& /*lambda_hint*/) {
  const int m = op_.term_count() - 1;
  const int k_prev = prev.term_count();

  std::vector<Vector> kd(m + 1);  // K_j d
  for (int j = 0; j <= m; ++j) kd[static_cast<size_t>(j)] = op_.K[static_cast<size_t>(j)] * d;

  Vector e_dd(m + 1);  // e_kjk = d^T K_j d
  for (int j = 0; j <= m; ++j) e_dd[j] = kd[static_cast<size_t>(j)].dot(d);

  Vector b = Vector::Constant(n_, e_dd[0]);
  if (m > 0) b += xi_ * e_dd.tail(m);
  const double b_scale = 1e-12 * std::abs(e_dd[0]);
  for (int n = 0; n < n_; ++n)
    if (std::abs(b[n]) < b_scale)
      throw NearSingularSampleError("elliptic stochastic_update: near-singular realization", n);

  Vector a = Vector::Constant(n_, d.dot(op_.F));
  for (int i = 0; i < k_prev; ++i) {
    Vector e_di(m + 1);  // e_kji = d^T K_j d_i
    for (int j = 0; j <= m; ++j) e_di[j] = kd[static_cast<size_t>(j)].dot(prev.couples[i].d);
    Vector s = Vector::Constant(n_, e_di[0]);
    if (m > 0) s += xi_ * e_di.tail(m);
    a -= prev.couples[i].lambda.cwiseProduct(s);
  }
  return a.cwiseQuotient(b);
}

Vector EllipticProblem::solve_at(const Eigen::Ref<const Vector>& xi_row) const {
  return solve_sparse(op_.combine(xi_row), op_.F);
}

double EllipticProblem::sample_residual(const SeparatedSolution& u, int n) const {
  if (n < 0 || n >= n_) throw std::invalid_argument("sample_residual: sample index out of range");
  const SpMat a = op_.combine(xi_.row(n).transpose());
  Vector u_n = u.term_count() > 0 ? u.evaluate_at_sample(n) : Vector::Zero(op_.dim());
  return (a * u_n - op_.F).norm() / op_.F.norm();
}

double EllipticProblem::probe_value(const Vector& interior_field) const {
  const Vector full = expand_with_boundary_zeros(mesh_, interior_field);
  return interpolate_at(mesh_, full, config_.probe_x, config_.probe_y);
}

Vector EllipticProblem::probe_samples(const SeparatedSolution& u) const {
  Vector out = Vector::Zero(n_);
  for (const auto& couple : u.couples) out += probe_value(couple.d) * couple.lambda;
  return out;
}

}  // namespace sepspde
