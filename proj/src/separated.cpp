#include "sepspde/separated.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "sepspde/sampling.hpp"

namespace sepspde {

namespace {

// A term is dropped as numerical noise (rather than retained) when its
// relative energy contribution sits at rounding level.
constexpr double kNoiseFloor = 1e-14;

double lambda_gram(const Vector& a, const Vector& b) {
  return pairwise_sum(a.size(), [&](std::ptrdiff_t i) { return a[i] * b[i]; }) /
         static_cast<double>(a.size());
}

// E{ u^2 } integrated over the deterministic domain, via Gram matrices.
double expansion_energy(const SeparatedSolution& u, const SpaceDot& dot) {
  const int k = u.term_count();
  double s = 0.0;
  for (int i = 0; i < k; ++i) {
    s += lambda_gram(u.couples[i].lambda, u.couples[i].lambda) *
         dot(u.couples[i].d, u.couples[i].d);
    for (int j = 0; j < i; ++j)
      s += 2.0 * lambda_gram(u.couples[i].lambda, u.couples[j].lambda) *
           dot(u.couples[i].d, u.couples[j].d);
  }
  return s;
}

// Deterministic irregular pattern used to reseed the inner loop if the
// all-ones initialization lands in the kernel of the deterministic update.
Vector fallback_seed(int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) {
    std::uint64_t z = static_cast<std::uint64_t>(i) + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    v[i] = static_cast<double>(z >> 11) * 0x1.0p-52 - 1.0;  // (-1, 1)
    if (v[i] == 0.0) v[i] = 0.5;
  }
  return v;
}

char const* format_double(char* buf, size_t cap, double v) {
  std::snprintf(buf, cap, "%.17g", v);
  return buf;
}

}  // namespace

Vector SeparatedSolution::evaluate_at_sample(int n) const {
  if (couples.empty()) return Vector();
  if (n < 0 || n >= couples.front().lambda.size())
    throw std::invalid_argument("evaluate_at_sample: sample index out of range");
  Vector out = Vector::Zero(couples.front().d.size());
  for (const auto& c : couples) out += c.lambda[n] * c.d;
  return out;
}

double local_error(const Vector& d_new, const Vector& d_old, const SpaceDot& dot) {
  const double n_new = std::sqrt(dot(d_new, d_new));
  const double n_old = std::sqrt(dot(d_old, d_old));
  if (std::abs(n_new - 1.0) > 1e-6 || std::abs(n_old - 1.0) > 1e-6)
    throw std::invalid_argument("local_error: modes must be normalized");
  return 2.0 - 2.0 * dot(d_new, d_old);
}

double global_error(const SeparatedSolution& u_k, const SeparatedSolution& u_km1,
                    const SpaceDot& dot) {
  const double denom = expansion_energy(u_k, dot);
  if (denom == 0.0) throw DegenerateSolutionError("global_error: u_k is identically zero");
  const double num = denom - expansion_energy(u_km1, dot);
  return std::abs(num) / denom;
}

SeparatedSolution enrich_until_converged(ProblemAdapter& adapter, const EnrichOptions& opts) {
  if (!(opts.eps_global > 0.0) || !(opts.eps_local > 0.0))
    throw std::invalid_argument("enrich_until_converged: tolerances must be positive");
  if (opts.max_outer < 1 || opts.max_inner < 1)
    throw std::invalid_argument("enrich_until_converged: iteration caps must be >= 1");

  const int n = adapter.sample_count();
  SeparatedSolution u;
  Matrix gram_d(opts.max_outer, opts.max_outer);
  Matrix gram_l(opts.max_outer, opts.max_outer);
  double energy = 0.0;  // integral of E{u_{k-1}^2}
  bool converged = false;
  double eps_g = std::numeric_limits<double>::infinity();

  for (int k = 1; k <= opts.max_outer && !converged; ++k) {
    ConvergenceRecord rec;
    rec.k = k;

    Vector lambda = Vector::Ones(n);
    Vector d, d_prev;
    bool have_prev = false;
    bool zero_increment = false;
    bool reseeded = false;

    for (int j = 1; j <= opts.max_inner; ++j) {
      Vector d_raw = adapter.deterministic_update(lambda, u);
      const double norm = std::sqrt(adapter.space_dot(d_raw, d_raw));
      if (!std::isfinite(norm)) throw Error("enrich_until_converged: non-finite mode norm");
      if (norm == 0.0) {
        // all-ones seed may be orthogonal to the residual; retry once with a
        // deterministic sign pattern before declaring the increment zero
        if (j == 1 && !reseeded) {
          lambda = fallback_seed(n);
          reseeded = true;
          continue;
        }
        zero_increment = true;
        break;
      }
      d = d_raw / norm;
      rec.inner_iterations = j;
      bool stagnated = false;
      if (have_prev) {
        const double eps_l = local_error(d, d_prev, [&](const Vector& a, const Vector& b) {
          return adapter.space_dot(a, b);
        });
        rec.eps_local.push_back(eps_l);
        lambda = adapter.stochastic_update(d, u, lambda);
        stagnated = eps_l < opts.eps_local;
      } else {
        // the mode norm is absorbed into lambda, so the root-selection hint
        // for the first sweep is the seed at that scale
        lambda = adapter.stochastic_update(d, u, Vector(norm * lambda));
        have_prev = true;
      }
      d_prev = d;
      if (lambda.squaredNorm() == 0.0) {
        // the residual is orthogonal to this mode at every sample
        zero_increment = true;
        break;
      }
      if (stagnated) break;
      if (j == opts.max_inner) rec.hit_max_inner = true;  // stagnation logged, couple accepted
    }

    if (zero_increment) {
      rec.eps_global = 0.0;
      rec.retained = false;
      u.history.push_back(rec);
      converged = true;
      break;
    }

    // candidate Gram row against existing couples
    const int kk = k - 1;
    gram_d(kk, kk) = 1.0;
    gram_l(kk, kk) = lambda_gram(lambda, lambda);
    double increment = gram_l(kk, kk);
    for (int i = 0; i < kk; ++i) {
      gram_d(i, kk) = gram_d(kk, i) = adapter.space_dot(u.couples[i].d, d);
      gram_l(i, kk) = gram_l(kk, i) = lambda_gram(u.couples[i].lambda, lambda);
      increment += 2.0 * gram_d(i, kk) * gram_l(i, kk);
    }
    const double energy_k = energy + increment;
    if (energy_k == 0.0)
      throw DegenerateSolutionError("enrich_until_converged: expansion energy vanished");
    eps_g = std::abs(increment) / energy_k;
    rec.eps_global = eps_g;

    if (k > 1 && eps_g <= kNoiseFloor) {
      rec.retained = false;  // rounding-level candidate, do not keep it
      u.history.push_back(rec);
      converged = true;
      break;
    }

    u.couples.push_back({std::move(lambda), std::move(d)});
    u.history.push_back(rec);
    energy = energy_k;
    if (eps_g <= opts.eps_global) converged = true;
  }

  if (!converged)
    throw NonConvergenceError("enrich_until_converged: eps_global " + std::to_string(eps_g) +
                                  " above target after " + std::to_string(opts.max_outer) +
                                  " terms",
                              u);
  return u;
}

void write_history_csv(std::ostream& out, const SeparatedSolution& solution) {
  char buf[40];
  out << "k,inner_iter,eps_local,eps_global\n";
  for (const auto& rec : solution.history) {
    for (int j = 0; j < rec.inner_iterations; ++j) {
      out << rec.k << "," << (j + 1) << ",";
      if (j >= 1 && j - 1 < static_cast<int>(rec.eps_local.size()))
        out << format_double(buf, sizeof buf, rec.eps_local[j - 1]);
      out << ",";
      if (j + 1 == rec.inner_iterations)
        out << format_double(buf, sizeof buf, rec.eps_global);
      out << "\n";
    }
  }
}

}  // namespace sepspde
