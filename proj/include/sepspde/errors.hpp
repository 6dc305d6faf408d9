#pragma once

#include <stdexcept>
#include <string>

namespace sepspde {

/// Base class for solver failures that are not precondition violations.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Direct sparse solve failed (singular or numerically unstable matrix).
class SolveError : public Error {
 public:
  using Error::Error;
};

/// A rank-one update degenerated (lambda samples vanish, zero mode, ...).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Explicit time stepping violated its stability bound.
class StabilityError : public Error {
 public:
  StabilityError(const std::string& what, int step) : Error(what), step(step) {}
  int step;
};

/// Per-sample algebraic equation has no admissible solution.
class InconsistentSampleError : public Error {
 public:
  InconsistentSampleError(const std::string& what, int sample) : Error(what), sample(sample) {}
  int sample;
};

/// Per-sample denominator of a ratio update is numerically zero.
class NearSingularSampleError : public Error {
 public:
  NearSingularSampleError(const std::string& what, int sample) : Error(what), sample(sample) {}
  int sample;
};

/// Monte Carlo reference run failed on too many samples.
class OracleError : public Error {
 public:
  using Error::Error;
};

}  // namespace sepspde
