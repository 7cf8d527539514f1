#pragma once

#include <functional>
#include <span>

namespace rislink::quad {

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subintervals = 2000;
};

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
  long evaluations = 0;
};

using Integrand = std::function<double(double)>;

// Globally adaptive 7/15-point Gauss-Kronrod on [lo, hi]. Interior
// breakpoints (kinks, peaks) seed the initial partition. Stops when the
// summed error estimate is below max(abs_tol, rel_tol * |value|); throws
// ConvergenceError when the subinterval budget runs out first.
Result integrate(const Integrand& f, double lo, double hi,
                 std::span<const double> breakpoints = {},
                 const Options& opts = {});

// Integral over [breakpoints.front(), inf). The last breakpoint x0 starts a
// mapped tail x = x0 + scale * u / (1 - u), u in [0, 1), so scale should be
// the length over which f decays.
Result integrate_to_infinity(const Integrand& f,
                             std::span<const double> breakpoints,
                             double tail_scale, const Options& opts = {});

}  // namespace rislink::quad
