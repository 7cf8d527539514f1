#pragma once

#include <stdexcept>
#include <string>

namespace rislink {

/// Argument outside the mathematical domain of a function (NaN, inf, or a
/// violated precondition such as x <= 0 for a log-gamma).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Argument inside the domain but beyond what double precision can represent.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// A Meijer G parameter set that violates its structural invariants.
class InvalidSpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative evaluation stopped before meeting its tolerance. Carries the
/// best estimate available and its error bound.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_estimate,
                   double error_bound)
      : std::runtime_error(what),
        best_estimate_(best_estimate),
        error_bound_(error_bound) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double best_estimate_;
  double error_bound_;
};

/// A computed quantity violates an invariant that holds analytically
/// (negative variance, a probability outside [0, 1], ...).
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Root bracketing failed: the residual has the same sign at both ends.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double lo, double hi,
              double residual_lo, double residual_hi)
      : std::runtime_error(what),
        lo_(lo),
        hi_(hi),
        residual_lo_(residual_lo),
        residual_hi_(residual_hi) {}

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double residual_lo() const noexcept { return residual_lo_; }
  double residual_hi() const noexcept { return residual_hi_; }

 private:
  double lo_;
  double hi_;
  double residual_lo_;
  double residual_hi_;
};

}  // namespace rislink
