#pragma once

#include <cstdint>

#include "sepspde/fdgrid.hpp"
#include "sepspde/sampling.hpp"
#include "sepspde/separated.hpp"

namespace sepspde {

/// Result of the per-sample scalar quadratic a x^2 + b x + c = 0.
/// When the discriminant is negative, `value` is the residual-minimizing
/// vertex -b / (2a) and `real_root` is false.
struct QuadraticRoot {
  double value = 0.0;
  bool real_root = true;
  double residual = 0.0;
};

/// Stable quadratic formula plus root selection: among real roots the one
/// closest to `previous` wins. Selection is invariant under scaling of
/// (a, b, c) by any nonzero factor.
QuadraticRoot solve_scalar_quadratic(double a, double b, double c, double previous);

/// Inviscid Burgers equation with Brownian-motion forcing on
/// [0, x_max] x [0, t_max].
struct BurgersConfig {
  int nt = 101;
  int nx = 51;
  double t_max = 1.0;
  double x_max = 2.0;
  double gamma = 0.0;    // viscosity; the paper's case is 0
  double sigma_f = 0.2;  // Brownian-motion scale
  int dimension = 1000;  // M
  int samples = 10000;   // N
  std::uint64_t seed = 1;
  enum class InitialProfile { Zero, Sine } initial_profile = InitialProfile::Zero;
  double initial_amplitude = 0.5;
  double probe_x = 1.0;
  double probe_t = 0.5;
};

/// N x nt table of force realizations f(t, theta^n) from the truncated
/// Karhunen-Loeve series of the Brownian motion.
Matrix force_samples(const BurgersConfig& config, const SampleEnsemble& ensemble);

class BurgersProblem : public ProblemAdapter {
 public:
  explicit BurgersProblem(const BurgersConfig& config);
  /// Uses an explicit realization table instead of the built-in generator.
  BurgersProblem(const BurgersConfig& config, Matrix xi_table);

  int sample_count() const override { return static_cast<int>(force_.rows()); }
  Vector deterministic_update(const Vector& lambda, const SeparatedSolution& prev) override;
  Vector stochastic_update(const Vector& d, const SeparatedSolution& prev,
                           const Vector& lambda_hint) override;
  double space_dot(const Vector& a, const Vector& b) const override;

  /// Explicit central-difference march of
  ///   h1 dd/dt + d/dx (h2 d^2 + h3 d) = h4 + gamma h1 dxx(d)
  /// starting from the given initial slice. Leapfrog with a midpoint start.
  SpaceTimeField march(double h1, double h2, const Matrix& h3, const Matrix& h4,
                       const Vector& initial_slice) const;

  Vector initial_profile_values() const;
  Vector probe_samples(const SeparatedSolution& u) const;
  double probe_value(const Vector& field_flat) const;

  const BurgersConfig& config() const { return config_; }
  const SpaceTimeGrid& grid() const { return grid_; }
  const Matrix& xi() const { return xi_; }
  const Matrix& force() const { return force_; }  // N x nt
  long negative_discriminant_count() const { return negative_disc_count_; }

 private:
  BurgersConfig config_;
  SpaceTimeGrid grid_;
  Matrix xi_;     // N x M
  Matrix force_;  // N x nt
  Vector weight_;  // trapezoid weights over the flattened grid
  long negative_disc_count_ = 0;
};

}  // namespace sepspde
