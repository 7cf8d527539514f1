#pragma once

#include <vector>

namespace rislink::special {

// G^{m,n}_{p,q}(z | a; b) with p = a.size(), q = b.size().
struct MeijerGSpec {
  int m = 0;
  int n = 0;
  std::vector<double> a;
  std::vector<double> b;
  double z = 1.0;

  int p() const { return static_cast<int>(a.size()); }
  int q() const { return static_cast<int>(b.size()); }
};

struct MeijerGResult {
  double value = 0.0;
  double abs_error = 0.0;  // estimated
  long evaluations = 0;
};

// value = mantissa * exp(log_scale). Lets callers fold a large prefactor
// (e.g. 1/Gamma(a+1)) in before exponentiating.
struct ScaledMeijerG {
  double mantissa = 0.0;
  double log_scale = 0.0;
  double mantissa_error = 0.0;
  long evaluations = 0;
};

// Throws InvalidSpecError for: orders out of range, non-finite parameters,
// z <= 0, a pole collision (a_j - b_k a positive integer for j <= n, k <= m),
// or upper/lower pole ladders that overlap so no contour separates them.
void validate(const MeijerGSpec& spec);

// G^{m,n}_{p,q}(z | a; b) = G^{n,m}_{q,p}(1/z | 1-b; 1-a).
MeijerGSpec invert_argument(const MeijerGSpec& spec);

// Mellin-Barnes integral along a line or parabola through the real-axis
// saddle of the integrand, trapezoid rule with step halving. rel_tol must lie
// in [1e-12, 1e-4]. Throws ConvergenceError if the step or truncation limits
// are exhausted.
ScaledMeijerG meijer_g_scaled(const MeijerGSpec& spec, double rel_tol = 1e-10);
MeijerGResult meijer_g(const MeijerGSpec& spec, double rel_tol = 1e-10);

}  // namespace rislink::special
