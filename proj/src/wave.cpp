#include "sepspde/wave.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sepspde/errors.hpp"
#include "sepspde/fdgrid.hpp"

namespace sepspde {

WaveOperator::WaveOperator(const TriMesh& mesh, double wave_speed) : mesh_(mesh) {
  const Vector c = Vector::Constant(mesh_.node_count(), wave_speed);
  k_int_ = restrict_interior(mesh_, assemble_stiffness(mesh_, c));
  m_int_ = restrict_interior(mesh_, lumped_mass(mesh_));
  // largest generalized frequency via power iteration on M^-1 K
  Vector v = Vector::Ones(k_int_.rows());
  v /= v.norm();
  double mu = 0.0;
  for (int it = 0; it < 100; ++it) {
    Vector w = (k_int_ * v).cwiseQuotient(m_int_);
    mu = v.dot(w);
    const double norm = w.norm();
    if (norm == 0.0) break;
    v = w / norm;
  }
  omega_max_ = std::sqrt(std::max(mu, 0.0));
}

Matrix WaveOperator::step(const Eigen::Ref<const Vector>& g, int nt, double dt) const {
  if (g.size() != k_int_.rows()) throw std::invalid_argument("wave step: field size mismatch");
  if (nt < 2) throw std::invalid_argument("wave step: need at least 2 time points");
  if (!(dt * omega_max_ <= 2.0))
    throw StabilityError("wave step: dt exceeds the central-difference bound 2/omega_max", 0);
  Matrix u(nt, g.size());
  u.row(0) = g.transpose();
  // zero initial velocity: symmetric first step
  Vector acc = -(k_int_ * g).cwiseQuotient(m_int_);
  u.row(1) = (g + 0.5 * dt * dt * acc).transpose();
  for (int m = 1; m + 1 < nt; ++m) {
    acc = -(k_int_ * u.row(m).transpose()).cwiseQuotient(m_int_);
    u.row(m + 1) = 2.0 * u.row(m) - u.row(m - 1) + dt * dt * acc.transpose();
  }
  return u;
}

Vector WaveOperator::energy_trace(const Matrix& slices, double dt) const {
  const int nt = static_cast<int>(slices.rows());
  Vector energy(nt - 2);
  for (int m = 1; m + 1 < nt; ++m) {
    const Vector v = (slices.row(m + 1) - slices.row(m - 1)).transpose() / (2.0 * dt);
    const Vector u = slices.row(m).transpose();
    energy[m - 1] = 0.5 * v.dot(m_int_.cwiseProduct(v)) + 0.5 * u.dot(k_int_ * u);
  }
  return energy;
}

WaveProblem::WaveProblem(const WaveConfig& config)
    : WaveProblem(config, generate(Distribution::StandardNormal, config.samples,
                                   std::max(config.dimension, 1), config.seed)
                              .samples) {}

WaveProblem::WaveProblem(const WaveConfig& config, Matrix xi_table)
    : config_(config), op_(mesh_disk(config.mesh_nodes), config.wave_speed) {
  if (config.dimension < 1) throw std::invalid_argument("wave: dimension must be >= 1");
  if (config.time_points < 2) throw std::invalid_argument("wave: need at least 2 time points");
  if (!(dt() * op_.max_frequency() <= 2.0))
    throw StabilityError("wave: time grid violates the stability bound at setup", 0);
  if (xi_table.rows() < 2) throw std::invalid_argument("wave: need at least 2 samples");
  if (xi_table.cols() != config.dimension)
    throw std::invalid_argument("wave: realization table does not match dimension");
  xi_ = std::move(xi_table);

  const TriMesh& mesh = op_.mesh();
  ic_modes_.resize(mesh.interior_count(), config.dimension);
  for (size_t i = 0; i < mesh.interior_nodes.size(); ++i) {
    const int node = mesh.interior_nodes[i];
    const double r = std::hypot(mesh.nodes(node, 0), mesh.nodes(node, 1));
    for (int j = 0; j < config.dimension; ++j)
      ic_modes_(static_cast<Eigen::Index>(i), j) =
          std::numbers::sqrt2 * std::sin((j + 1) * std::numbers::pi * r);
  }
  wt_ = trapezoid_weights(config.time_points, dt());
}

double WaveProblem::space_dot(const Vector& a, const Vector& b) const {
  // space-time norm: lumped mass in space, trapezoid in time
  const int nd = static_cast<int>(op_.mass().size());
  const int nt = config_.time_points;
  if (a.size() != static_cast<Eigen::Index>(nt) * nd || b.size() != a.size())
    throw std::invalid_argument("wave space_dot: field size mismatch");
  double acc = 0.0;
  for (int m = 0; m < nt; ++m) {
    const auto am = a.segment(static_cast<Eigen::Index>(m) * nd, nd);
    const auto bm = b.segment(static_cast<Eigen::Index>(m) * nd, nd);
    acc += wt_[m] * am.cwiseProduct(op_.mass()).dot(bm);
  }
  return acc;
}

Vector WaveProblem::initial_displacement(const Eigen::Ref<const Vector>& xi_row) const {
  return ic_modes_ * xi_row;
}

Vector WaveProblem::deterministic_update(const Vector& lambda, const SeparatedSolution& prev) {
  const int n = sample_count();
  if (lambda.size() != n) throw std::invalid_argument("deterministic_update: lambda size mismatch");
  const double mean_sq = pairwise_mean(lambda.array().square());
  if (!(mean_sq > 0.0)) throw DegenerateError("wave deterministic_update: degenerate lambda");
  const int nd = static_cast<int>(op_.mass().size());

  // All randomness sits in the initial data, so the theta-Galerkin projection
  // reduces to a deterministic wave solve from the projected initial slice.
  const Vector mean_lxi = xi_.transpose() * lambda / static_cast<double>(n);  // E{lambda xi_j}
  Vector g = ic_modes_ * mean_lxi;
  for (const auto& couple : prev.couples) {
    const double w = pairwise_mean(lambda.cwiseProduct(couple.lambda));
    g -= w * couple.d.head(nd);
  }
  g /= mean_sq;

  const Matrix slices = op_.step(g, config_.time_points, dt());
  Vector out(static_cast<Eigen::Index>(config_.time_points) * nd);
  for (int m = 0; m < config_.time_points; ++m)
    out.segment(static_cast<Eigen::Index>(m) * nd, nd) = slices.row(m).transpose();
  return out;
}

Vector WaveProblem::stochastic_update(const Vector& d, const SeparatedSolution& prev,
                                      const Vector& /*lambda_hint*/) {
  const int nd = static_cast<int>(op_.mass().size());
  const Vector d0 = d.head(nd);
  const Vector d0_mass = d0.cwiseProduct(op_.mass());
  const double denom = d0_mass.dot(d0);
  if (denom < 1e-14)
    throw DegenerateError("wave stochastic_update: initial slice of the mode vanishes");

  const Vector beta = ic_modes_.transpose() * d0_mass;  // <d0, s_j>_M
  Vector lambda = xi_ * beta;
  for (const auto& couple : prev.couples) {
    const double alpha = d0_mass.dot(couple.d.head(nd));
    lambda -= alpha * couple.lambda;
  }
  return lambda / denom;
}

double WaveProblem::probe_value(const Vector& field_flat) const {
  const int nd = static_cast<int>(op_.mass().size());
  const int nt = config_.time_points;
  const double ft = config_.probe_t / dt();
  const int m = std::min(static_cast<int>(ft), nt - 2);
  const double at = ft - m;
  const Vector full0 =
      expand_with_boundary_zeros(op_.mesh(), field_flat.segment(static_cast<Eigen::Index>(m) * nd, nd));
  const double v0 = interpolate_at(op_.mesh(), full0, config_.probe_x, config_.probe_y);
  if (at == 0.0) return v0;
  const Vector full1 = expand_with_boundary_zeros(
      op_.mesh(), field_flat.segment(static_cast<Eigen::Index>(m + 1) * nd, nd));
  const double v1 = interpolate_at(op_.mesh(), full1, config_.probe_x, config_.probe_y);
  return (1.0 - at) * v0 + at * v1;
}

double WaveProblem::probe_value_slices(const Matrix& slices) const {
  const int nt = static_cast<int>(slices.rows());
  const double ft = config_.probe_t / dt();
  const int m = std::min(static_cast<int>(ft), nt - 2);
  const double at = ft - m;
  const Vector full0 = expand_with_boundary_zeros(op_.mesh(), slices.row(m).transpose());
  const double v0 = interpolate_at(op_.mesh(), full0, config_.probe_x, config_.probe_y);
  if (at == 0.0) return v0;
  const Vector full1 = expand_with_boundary_zeros(op_.mesh(), slices.row(m + 1).transpose());
  const double v1 = interpolate_at(op_.mesh(), full1, config_.probe_x, config_.probe_y);
  return (1.0 - at) * v0 + at * v1;
}

Vector WaveProblem::probe_samples(const SeparatedSolution& u) const {
  Vector out = Vector::Zero(sample_count());
  for (const auto& couple : u.couples) out += probe_value(couple.d) * couple.lambda;
  return out;
}

}  // namespace sepspde
