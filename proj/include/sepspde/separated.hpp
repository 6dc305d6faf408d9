#pragma once

#include <functional>
#include <iosfwd>
#include <limits>
#include <vector>

#include "sepspde/errors.hpp"
#include "sepspde/math.hpp"

namespace sepspde {

/// One rank-one term: lambda holds the N per-sample values, d the nodal
/// (or space-time) deterministic field with unit discrete L2 norm.
struct Couple {
  Vector lambda;
  Vector d;
};

struct ConvergenceRecord {
  int k = 0;
  int inner_iterations = 0;
  std::vector<double> eps_local;  // one entry per inner comparison, from the 2nd sweep on
  double eps_global = std::numeric_limits<double>::quiet_NaN();
  bool retained = true;
  bool hit_max_inner = false;
};

/// Truncated separated expansion u_k(x, theta) = sum_i lambda_i(theta) d_i(x)
/// together with its convergence history.
struct SeparatedSolution {
  std::vector<Couple> couples;
  std::vector<ConvergenceRecord> history;

  int term_count() const { return static_cast<int>(couples.size()); }
  Vector evaluate_at_sample(int n) const;
};

using SpaceDot = std::function<double(const Vector&, const Vector&)>;

/// Supplies the two alternating Galerkin updates for one benchmark problem.
/// Both updates are deterministic functions of their inputs and the fixed
/// sample ensemble held by the implementation.
class ProblemAdapter {
 public:
  virtual ~ProblemAdapter() = default;

  virtual int sample_count() const = 0;

  /// Solves the deterministic problem for the mode paired with the given
  /// lambda samples. Returns the unnormalized field.
  virtual Vector deterministic_update(const Vector& lambda, const SeparatedSolution& prev) = 0;

  /// Per-sample algebraic solve for lambda given a unit-norm mode d.
  /// lambda_hint carries the previous inner iterate (zeros on the first sweep)
  /// for problems whose per-sample equation has several roots.
  virtual Vector stochastic_update(const Vector& d, const SeparatedSolution& prev,
                                   const Vector& lambda_hint) = 0;

  /// Discrete L2 inner product of the problem's deterministic space.
  virtual double space_dot(const Vector& a, const Vector& b) const = 0;
};

struct EnrichOptions {
  double eps_global = 1e-6;  // epsilon_1: truncation criterion
  double eps_local = 1e-3;   // epsilon_2: inner stagnation criterion
  int max_outer = 50;
  int max_inner = 25;
};

/// Outer loop ran out of iterations with eps_global still above target.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, SeparatedSolution partial)
      : Error(what), partial(std::move(partial)) {}
  SeparatedSolution partial;
};

/// Raised when a solution is identically zero where a norm is required.
class DegenerateSolutionError : public Error {
 public:
  using Error::Error;
};

/// Double-loop rank-one enrichment: the outer loop appends couples until the
/// global truncation error drops to eps_global, the inner loop alternates the
/// two Galerkin updates until the mode stagnates (eps_local).
SeparatedSolution enrich_until_converged(ProblemAdapter& adapter, const EnrichOptions& opts = {});

/// Relative energy of the increment between two expansions over the same
/// discretization and ensemble, evaluated from Gram matrices.
double global_error(const SeparatedSolution& u_k, const SeparatedSolution& u_km1,
                    const SpaceDot& dot);

/// Stagnation measure 2 - 2 <d_new, d_old> for unit-norm modes.
double local_error(const Vector& d_new, const Vector& d_old, const SpaceDot& dot);

/// Long-form history: one row per inner iteration
/// (k, inner_iter, eps_local, eps_global).
void write_history_csv(std::ostream& out, const SeparatedSolution& solution);

}  // namespace sepspde
