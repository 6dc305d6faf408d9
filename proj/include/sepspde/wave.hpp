#pragma once

#include <cstdint>

#include "sepspde/fem2d.hpp"
#include "sepspde/sampling.hpp"
#include "sepspde/separated.hpp"

namespace sepspde {

/// d^2 u / dt^2 = c(x,y) Laplace(u) on the unit disk with zero Dirichlet
/// boundary, zero initial velocity and a stochastic initial displacement.
struct WaveConfig {
  int mesh_nodes = 549;
  int time_points = 201;
  double t_max = 2.0;
  double wave_speed = 1.0;  // constant c(x,y)
  int dimension = 1000;     // M
  int samples = 10000;      // N
  std::uint64_t seed = 1;
  double probe_x = 0.0;
  double probe_y = 0.0;
  double probe_t = 1.0;
};

/// Space discretization shared by the separated solver and the per-sample
/// reference marches: P1 stiffness, lumped mass, and the largest discrete
/// frequency used by the central-difference stability bound dt <= 2 / omega.
class WaveOperator {
 public:
  WaveOperator(const TriMesh& mesh, double wave_speed);

  /// Central-difference-in-time march from displacement g (interior dof) and
  /// zero initial velocity. Returns nt x n_interior slices.
  Matrix step(const Eigen::Ref<const Vector>& g, int nt, double dt) const;

  /// Discrete energy (v^T M v) / 2 + (u^T K u) / 2 with centered velocity, at
  /// each interior time level of a march.
  Vector energy_trace(const Matrix& slices, double dt) const;

  const TriMesh& mesh() const { return mesh_; }
  const SpMat& stiffness() const { return k_int_; }
  const Vector& mass() const { return m_int_; }
  double max_frequency() const { return omega_max_; }

 private:
  TriMesh mesh_;
  SpMat k_int_;
  Vector m_int_;  // lumped
  double omega_max_ = 0.0;
};

class WaveProblem : public ProblemAdapter {
 public:
  explicit WaveProblem(const WaveConfig& config);
  /// Uses an explicit realization table instead of the built-in generator.
  WaveProblem(const WaveConfig& config, Matrix xi_table);

  int sample_count() const override { return static_cast<int>(xi_.rows()); }
  Vector deterministic_update(const Vector& lambda, const SeparatedSolution& prev) override;
  Vector stochastic_update(const Vector& d, const SeparatedSolution& prev,
                           const Vector& lambda_hint) override;
  double space_dot(const Vector& a, const Vector& b) const override;

  /// Initial displacement realization for one xi row (interior dof).
  Vector initial_displacement(const Eigen::Ref<const Vector>& xi_row) const;

  Vector probe_samples(const SeparatedSolution& u) const;
  double probe_value(const Vector& field_flat) const;
  double probe_value_slices(const Matrix& slices) const;  // nt x n_interior

  const WaveConfig& config() const { return config_; }
  const WaveOperator& op() const { return op_; }
  const Matrix& xi() const { return xi_; }
  const Matrix& ic_modes() const { return ic_modes_; }  // interior dof x M
  double dt() const { return config_.t_max / (config_.time_points - 1); }

 private:
  WaveConfig config_;
  WaveOperator op_;
  Matrix xi_;        // N x M
  Matrix ic_modes_;  // sqrt(2) sin(j pi r) at interior nodes
  Vector wt_;        // trapezoid weights in time
};

}  // namespace sepspde
