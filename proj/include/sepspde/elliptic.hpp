#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "sepspde/fem2d.hpp"
#include "sepspde/klexp.hpp"
#include "sepspde/sampling.hpp"
#include "sepspde/separated.hpp"

namespace sepspde {

/// -div(c grad u) + a u = f on the unit square, homogeneous Dirichlet data,
/// with c(x,y,theta) = mean_diffusion + fluctuation_scale sum_j xi_j nu_j c_j.
struct EllipticConfig {
  int mesh_nodes = 808;
  int dimension = 100;  // M
  int samples = 100000;  // N
  std::uint64_t seed = 1;
  double mean_diffusion = 50.0;
  double reaction = 8.0;
  double load = 150.0;
  double fluctuation_scale = 0.3;
  double probe_x = 0.5;
  double probe_y = 0.5;
};

class EllipticProblem : public ProblemAdapter {
 public:
  explicit EllipticProblem(const EllipticConfig& config);
  /// Uses an explicit realization table instead of the built-in generator.
  EllipticProblem(const EllipticConfig& config, Matrix xi_table);

  int sample_count() const override { return n_; }
  Vector deterministic_update(const Vector& lambda, const SeparatedSolution& prev) override;
  Vector stochastic_update(const Vector& d, const SeparatedSolution& prev,
                           const Vector& lambda_hint) override;
  double space_dot(const Vector& a, const Vector& b) const override;

  /// Relative residual of the per-sample algebraic system at sample n.
  double sample_residual(const SeparatedSolution& u, int n) const;

  /// Direct sparse solve of the sampled system for an arbitrary xi row.
  Vector solve_at(const Eigen::Ref<const Vector>& xi_row) const;

  /// u(probe, theta^n) for every ensemble sample.
  Vector probe_samples(const SeparatedSolution& u) const;
  double probe_value(const Vector& interior_field) const;

  const EllipticConfig& config() const { return config_; }
  const TriMesh& mesh() const { return mesh_; }
  const KlBasis& kl() const { return kl_; }
  const StochasticOperator& op() const { return op_; }
  const Matrix& xi() const { return xi_; }

 private:
  EllipticConfig config_;
  int n_ = 0;
  TriMesh mesh_;
  KlBasis kl_;
  StochasticOperator op_;
  Matrix xi_;  // N x M ensemble table
  std::unique_ptr<SparseSolver> solver_;
};

}  // namespace sepspde
