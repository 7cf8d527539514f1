#include "rislink/meijer_g.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "rislink/errors.hpp"
#include "rislink/special_functions.hpp"

namespace rislink::special {
namespace {

using cplx = std::complex<double>;

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxHalvings = 12;
constexpr double kMaxTruncation = 1e7;

// log of the Mellin-Barnes kernel
//   prod_{j<=m} Gamma(b_j - s) prod_{j<=n} Gamma(1 - a_j + s)
//   / prod_{j>m} Gamma(1 - b_j + s) prod_{j>n} Gamma(a_j - s)
// plus s log z.
class Kernel {
 public:
  explicit Kernel(const MeijerGSpec& spec) : spec_(spec), log_z_(std::log(spec.z)) {}

  cplx log_value(cplx s) const {
    cplx r = s * log_z_;
    for (int j = 0; j < spec_.q(); ++j) {
      if (j < spec_.m) {
        r += ln_gamma(spec_.b[j] - s);
      } else {
        r -= ln_gamma(1.0 - spec_.b[j] + s);
      }
    }
    for (int j = 0; j < spec_.p(); ++j) {
      if (j < spec_.n) {
        r += ln_gamma(1.0 - spec_.a[j] + s);
      } else {
        r -= ln_gamma(spec_.a[j] - s);
      }
    }
    return r;
  }

  // log|kernel| on the real axis.
  double log_abs(double c) const { return log_value(cplx(c, 0.0)).real(); }

 private:
  const MeijerGSpec& spec_;
  double log_z_;
};

bool is_positive_integer(double d) {
  if (d < 0.5) return false;
  return std::abs(d - std::round(d)) <= 1e-12 * std::max(1.0, std::abs(d));
}

// Minimizes f on [lo, hi] given an interior bracketing triple.
template <class F>
double golden_section(F&& f, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 200 && (hi - lo) > 1e-10 * (1.0 + std::abs(lo)); ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

// Real point between the pole ladders where |kernel| is smallest; the
// integrand along the steepest-descent direction is then as flat as it gets.
double find_saddle(const Kernel& kernel, double lo, double hi) {
  std::vector<double> xs;
  if (std::isfinite(lo) && std::isfinite(hi)) {
    constexpr int kGrid = 64;
    for (int i = 0; i < kGrid; ++i) {
      xs.push_back(lo + (hi - lo) * (i + 0.5) / kGrid);
    }
  } else if (std::isfinite(lo)) {
    for (int k = -20; k <= 20; ++k) xs.push_back(lo + std::ldexp(1.0, k) / 64.0);
  } else if (std::isfinite(hi)) {
    for (int k = 20; k >= -20; --k) xs.push_back(hi - std::ldexp(1.0, k) / 64.0);
  } else {
    for (int k = 12; k >= -6; --k) xs.push_back(-std::ldexp(1.0, k));
    xs.push_back(0.0);
    for (int k = -6; k <= 12; ++k) xs.push_back(std::ldexp(1.0, k));
  }
  std::size_t best = 0;
  double best_val = kInf;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double v = kernel.log_abs(xs[i]);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  if (best == 0 || best + 1 == xs.size()) {
    // Minimum at the edge of the search window: either pressed against a
    // pole ladder (refine toward it) or decreasing without bound (keep it).
    const bool finite_edge = best == 0 ? std::isfinite(lo) : std::isfinite(hi);
    if (!finite_edge) return xs[best];
    const double edge = best == 0 ? lo : hi;
    const double inner = xs[best == 0 ? 1 : xs.size() - 2];
    const double a = std::min(edge, inner);
    const double b = std::max(edge, inner);
    const double shrink = 1e-12 * (b - a);
    return golden_section([&](double c) { return kernel.log_abs(c); },
                          a + shrink, b - shrink);
  }
  return golden_section([&](double c) { return kernel.log_abs(c); },
                        xs[best - 1], xs[best + 1]);
}

}  // namespace

void validate(const MeijerGSpec& spec) {
  if (spec.m < 0 || spec.m > spec.q() || spec.n < 0 || spec.n > spec.p()) {
    throw InvalidSpecError("meijer_g: orders must satisfy 0<=m<=q, 0<=n<=p");
  }
  if (!(spec.z > 0.0) || !std::isfinite(spec.z)) {
    throw DomainError("meijer_g: z must be positive and finite");
  }
  for (double v : spec.a) {
    if (!std::isfinite(v)) throw InvalidSpecError("meijer_g: non-finite a parameter");
  }
  for (double v : spec.b) {
    if (!std::isfinite(v)) throw InvalidSpecError("meijer_g: non-finite b parameter");
  }
  double lo = -kInf;
  double hi = kInf;
  for (int j = 0; j < spec.n; ++j) lo = std::max(lo, spec.a[j] - 1.0);
  for (int k = 0; k < spec.m; ++k) hi = std::min(hi, spec.b[k]);
  for (int j = 0; j < spec.n; ++j) {
    for (int k = 0; k < spec.m; ++k) {
      if (is_positive_integer(spec.a[j] - spec.b[k])) {
        throw InvalidSpecError("meijer_g: pole collision a_" + std::to_string(j + 1) +
                               " - b_" + std::to_string(k + 1) +
                               " is a positive integer");
      }
    }
  }
  if (!(lo < hi)) {
    throw InvalidSpecError(
        "meijer_g: upper and lower pole ladders overlap; no separating contour");
  }
}

MeijerGSpec invert_argument(const MeijerGSpec& spec) {
  MeijerGSpec out;
  out.m = spec.n;
  out.n = spec.m;
  out.z = 1.0 / spec.z;
  for (double v : spec.b) out.a.push_back(1.0 - v);
  for (double v : spec.a) out.b.push_back(1.0 - v);
  return out;
}

ScaledMeijerG meijer_g_scaled(const MeijerGSpec& input, double rel_tol) {
  if (!(rel_tol >= 1e-12 && rel_tol <= 1e-4)) {
    throw DomainError("meijer_g: rel_tol must lie in [1e-12, 1e-4]");
  }
  validate(input);
  const MeijerGSpec spec =
      (input.p() > input.q() && input.z > 1.0) ? invert_argument(input) : input;
  const int m = spec.m;
  const int n = spec.n;
  const int p = spec.p();
  const int q = spec.q();

  double lo = -kInf;
  double hi = kInf;
  for (int j = 0; j < n; ++j) lo = std::max(lo, spec.a[j] - 1.0);
  for (int k = 0; k < m; ++k) hi = std::min(hi, spec.b[k]);

  // Decay of the kernel along a vertical line is exp(-pi c* |Im s|).
  const double c_star = m + n - 0.5 * (p + q);
  double sigma = 0.0;
  if (c_star <= 0.0) {
    const bool close_right = p < q || (p == q && spec.z <= 1.0);
    // An empty pole set inside the loop makes the integral vanish.
    if ((close_right && m == 0) || (!close_right && n == 0)) {
      return {0.0, 0.0, 0.0, 0};
    }
    sigma = close_right ? 1.0 : -1.0;
  }

  const Kernel kernel(spec);
  const double c = find_saddle(kernel, lo, hi);
  const double phi_c = kernel.log_abs(c);
  if (!std::isfinite(phi_c)) {
    throw ConvergenceError("meijer_g: kernel not finite at contour vertex", 0.0, kInf);
  }

  double dist = kInf;
  if (std::isfinite(lo)) dist = std::min(dist, c - lo);
  if (std::isfinite(hi)) dist = std::min(dist, hi - c);
  const double dc = std::min(1e-3 * (1.0 + std::abs(c)), 0.5 * dist);
  const double curvature =
      (kernel.log_abs(c + dc) + kernel.log_abs(c - dc) - 2.0 * phi_c) / (dc * dc);
  const double width = 1.0 / std::sqrt(std::max(curvature, 1e-8));
  const double kappa = 0.5 / std::max({std::abs(c), width, 1.0});

  long evaluations = 0;
  // Im[kernel(s) s'(u)] / pi, normalized by exp(phi_c). The integrand over
  // the whole contour is conjugate-symmetric, so only u >= 0 is needed.
  auto g = [&](double u) {
    ++evaluations;
    const cplx s(c + sigma * kappa * u * u, u);
    const cplx ds(2.0 * sigma * kappa * u, 1.0);
    const cplx w = std::exp(kernel.log_value(s) - phi_c) * ds;
    const double v = w.imag() / std::numbers::pi;
    return std::isfinite(v) ? v : 0.0;
  };

  double h = std::min(width, 1.0);
  double t_max = 32.0 * std::max(width, 1.0);
  long nodes = static_cast<long>(std::ceil(t_max / h));
  t_max = nodes * h;

  double sum = 0.5 * g(0.0);
  double abs_sum = std::abs(sum);
  for (long i = 1; i <= nodes; ++i) {
    const double v = g(i * h);
    sum += v;
    abs_sum += std::abs(v);
  }
  // Extend the truncation until the tail, estimated from the decay at T, is
  // negligible.
  for (;;) {
    const double edge = std::abs(g(t_max));
    const double tail = edge * t_max;
    const double s_abs = std::abs(h * sum);
    if (tail <= 0.1 * rel_tol * s_abs || tail <= kEps * h * abs_sum) break;
    if (t_max >= kMaxTruncation) {
      throw ConvergenceError("meijer_g: contour truncation limit reached",
                             h * sum * std::exp(phi_c), tail * std::exp(phi_c));
    }
    for (long i = nodes + 1; i <= 2 * nodes; ++i) {
      const double v = g(i * h);
      sum += v;
      abs_sum += std::abs(v);
    }
    nodes *= 2;
    t_max = nodes * h;
  }

  double estimate = h * sum;
  double delta = kInf;
  for (int halving = 0; halving < kMaxHalvings; ++halving) {
    h *= 0.5;
    double mid = 0.0;
    double mid_abs = 0.0;
    for (long i = 0; i < nodes; ++i) {
      const double v = g((2 * i + 1) * h);
      mid += v;
      mid_abs += std::abs(v);
    }
    nodes *= 2;
    sum += mid;
    abs_sum += mid_abs;
    const double refined = h * sum;
    delta = std::abs(refined - estimate);
    estimate = refined;
    if (delta <= rel_tol * std::abs(estimate) || delta <= 16.0 * kEps * h * abs_sum) {
      return {estimate, phi_c, delta, evaluations};
    }
  }
  throw ConvergenceError("meijer_g: trapezoid refinement did not converge",
                         estimate * std::exp(phi_c), delta * std::exp(phi_c));
}

MeijerGResult meijer_g(const MeijerGSpec& spec, double rel_tol) {
  const ScaledMeijerG r = meijer_g_scaled(spec, rel_tol);
  if (r.mantissa == 0.0) return {0.0, 0.0, r.evaluations};
  const double log_mag = std::log(std::abs(r.mantissa)) + r.log_scale;
  if (log_mag > std::log(std::numeric_limits<double>::max())) {
    throw RangeError("meijer_g: value overflows a double; use meijer_g_scaled");
  }
  const double scale = std::exp(r.log_scale);
  return {r.mantissa * scale, r.mantissa_error * scale, r.evaluations};
}

}  // namespace rislink::special
