#include "sepspde/klexp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>

#include "sepspde/errors.hpp"
#include "sepspde/fem2d.hpp"

namespace sepspde {

namespace {

constexpr double kPi = std::numbers::pi;

// Even roots solve omega sin(omega/2) - cos(omega/2) = 0 on (2n pi, (2n+1) pi);
// odd roots solve sin(omega/2) + omega cos(omega/2) = 0 on ((2n+1) pi, (2n+2) pi).
double family_function(double omega, bool even) {
  return even ? omega * std::sin(0.5 * omega) - std::cos(0.5 * omega)
              : std::sin(0.5 * omega) + omega * std::cos(0.5 * omega);
}

double family_derivative(double omega, bool even) {
  return even ? std::sin(0.5 * omega) + 0.5 * omega * std::cos(0.5 * omega) + 0.5 * std::sin(0.5 * omega)
              : 0.5 * std::cos(0.5 * omega) + std::cos(0.5 * omega) - 0.5 * omega * std::sin(0.5 * omega);
}

double find_root(int n, bool even) {
  const double base = even ? 2.0 * n * kPi : (2.0 * n + 1.0) * kPi;
  double lo = base + 1e-12, hi = base + kPi - 1e-12;
  double flo = family_function(lo, even), fhi = family_function(hi, even);
  if (flo * fhi > 0.0)
    throw Error("exp_kernel_eigenpairs: failed to bracket transcendental root " +
                std::to_string(n) + (even ? " (even)" : " (odd)"));
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = family_function(mid, even);
    if (flo * fm <= 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  double omega = 0.5 * (lo + hi);
  for (int it = 0; it < 4; ++it) {  // Newton polish
    const double f = family_function(omega, even);
    const double df = family_derivative(omega, even);
    if (df == 0.0) break;
    const double next = omega - f / df;
    if (next > base && next < base + kPi) omega = next;
  }
  return omega;
}

}  // namespace

double Kl1dMode::evaluate(double x) const {
  const double s = x - 0.5;
  if (even) {
    const double norm = std::sqrt(0.5 + std::sin(omega) / (2.0 * omega));
    return std::cos(omega * s) / norm;
  }
  const double norm = std::sqrt(0.5 - std::sin(omega) / (2.0 * omega));
  return std::sin(omega * s) / norm;
}

std::vector<Kl1dMode> exp_kernel_eigenpairs_1d(int count) {
  if (count < 1) throw std::invalid_argument("exp_kernel_eigenpairs_1d: count must be positive");
  std::vector<Kl1dMode> modes;
  modes.reserve(count);
  // roots interleave: even_0 < odd_0 < even_1 < odd_1 < ...
  for (int i = 0; i < count; ++i) {
    const bool even = (i % 2 == 0);
    Kl1dMode m;
    m.even = even;
    m.omega = find_root(i / 2, even);
    m.lambda = 2.0 / (1.0 + m.omega * m.omega);
    modes.push_back(m);
  }
  return modes;
}

double KlBasis::evaluate_raw(int j, double x, double y) const {
  const auto& [ix, iy] = tensor_index.at(static_cast<size_t>(j));
  return sign[static_cast<size_t>(j)] * modes_1d[ix].evaluate(x) * modes_1d[iy].evaluate(y);
}

KlBasis exp_kernel_eigenpairs(const TriMesh& mesh, int m_count) {
  if (m_count < 1) throw std::invalid_argument("exp_kernel_eigenpairs: M must be >= 1");
  KlBasis basis;
  // enough 1D modes that the top m_count products only use them
  const int n1d = m_count + 1;
  basis.modes_1d = exp_kernel_eigenpairs_1d(n1d);

  struct Entry {
    double value;
    int ix, iy;
    bool operator<(const Entry& o) const {
      if (value != o.value) return value < o.value;  // max-heap on value
      if (ix != o.ix) return ix > o.ix;              // then lexicographic
      return iy > o.iy;
    }
  };
  // the product table is sorted along both axes; walk it with a heap
  std::priority_queue<Entry> heap;
  const auto lam = [&](int i) { return basis.modes_1d[i].lambda; };
  heap.push({lam(0) * lam(0), 0, 0});
  while (static_cast<int>(basis.nu.size()) < m_count) {
    const Entry e = heap.top();
    heap.pop();
    basis.nu.push_back(std::sqrt(e.value));
    basis.tensor_index.emplace_back(e.ix, e.iy);
    if (e.iy + 1 < n1d) heap.push({lam(e.ix) * lam(e.iy + 1), e.ix, e.iy + 1});
    if (e.iy == 0 && e.ix + 1 < n1d) heap.push({lam(e.ix + 1) * lam(0), e.ix + 1, 0});
  }

  // nodal fields, rescaled to unit discrete L2 norm
  const int n = mesh.node_count();
  const SpMat mass = assemble_mass(mesh);
  basis.modes.resize(n, m_count);
  basis.sign.assign(m_count, 1.0);
  for (int j = 0; j < m_count; ++j) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = basis.evaluate_raw(j, mesh.nodes(i, 0), mesh.nodes(i, 1));
    const double norm = std::sqrt(v.dot(mass * v));
    if (!(norm > 0.0))
      throw Error("exp_kernel_eigenpairs: mode " + std::to_string(j) +
                  " vanishes on this mesh");
    v /= norm;
    // sign convention: first nonzero nodal value positive
    const double scale = v.cwiseAbs().maxCoeff();
    for (int i = 0; i < n; ++i) {
      if (std::abs(v[i]) > 1e-12 * scale) {
        if (v[i] < 0.0) {
          v = -v;
          basis.sign[j] = -1.0;
        }
        break;
      }
    }
    basis.modes.col(j) = v;
  }
  return basis;
}

double brownian_force_eval(std::span<const double> xi_row, double t) {
  double acc = 0.0;
  for (size_t j = xi_row.size(); j-- > 0;) {  // small terms first
    const double w = (static_cast<double>(j) + 0.5) * kPi;
    acc += xi_row[j] * std::sin(w * t) / w;
  }
  return std::numbers::sqrt2 / 5.0 * acc;
}

double wave_ic_eval(std::span<const double> xi_row, double r) {
  double acc = 0.0;
  for (size_t j = xi_row.size(); j-- > 0;)
    acc += xi_row[j] * std::sin((static_cast<double>(j) + 1.0) * kPi * r);
  return std::numbers::sqrt2 * acc;
}

}  // namespace sepspde
