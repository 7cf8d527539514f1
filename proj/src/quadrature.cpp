#include "rislink/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "rislink/errors.hpp"

namespace rislink::quad {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Kronrod abscissae on [0, 1]; odd indices are the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo;
  double hi;
  double value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gauss_kronrod(const Integrand& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  const double fc = f(center);
  double res_g = fc * kWg[3];
  double res_k = fc * kWgk[7];
  double res_abs = std::abs(res_k);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    const double sum = f1[j] + f2[j];
    res_k += kWgk[j] * sum;
    res_abs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) res_g += kWg[j / 2] * sum;
  }
  const double mean = 0.5 * res_k;
  double res_asc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    res_asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  const double ah = std::abs(half);
  res_asc *= ah;
  res_abs *= ah;
  double err = std::abs((res_k - res_g) * half);
  if (res_asc != 0.0 && err != 0.0) {
    err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  }
  if (res_abs > std::numeric_limits<double>::min() / (50.0 * kEps)) {
    err = std::max(50.0 * kEps * res_abs, err);
  }
  return {lo, hi, res_k * half, err};
}

Result adapt(const Integrand& f, std::vector<double> points, const Options& opts) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::priority_queue<Segment> heap;
  Result result;
  double value = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const Segment s = gauss_kronrod(f, points[i], points[i + 1]);
    result.evaluations += 15;
    value += s.value;
    error += s.error;
    heap.push(s);
  }
  int count = static_cast<int>(heap.size());
  auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(value)); };
  while (error > target() && !heap.empty()) {
    if (count >= opts.max_subintervals) {
      throw ConvergenceError("quadrature: subinterval limit reached", value, error);
    }
    const Segment s = heap.top();
    const double mid = 0.5 * (s.lo + s.hi);
    if (!(mid > s.lo && mid < s.hi)) {
      throw ConvergenceError("quadrature: interval cannot be bisected further",
                             value, error);
    }
    heap.pop();
    const Segment left = gauss_kronrod(f, s.lo, mid);
    const Segment right = gauss_kronrod(f, mid, s.hi);
    result.evaluations += 30;
    value += left.value + right.value - s.value;
    error += left.error + right.error - s.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  // Re-sum from the segments to drop the drift of the running updates.
  value = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  if (!std::isfinite(value)) {
    throw ConvergenceError("quadrature: non-finite integral", value, error);
  }
  result.value = value;
  result.abs_error = error;
  return result;
}

}  // namespace

Result integrate(const Integrand& f, double lo, double hi,
                 std::span<const double> breakpoints, const Options& opts) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("integrate: finite limits required");
  }
  if (lo == hi) return {};
  const double sign = hi < lo ? -1.0 : 1.0;
  const double a = std::min(lo, hi);
  const double b = std::max(lo, hi);
  std::vector<double> points{a, b};
  for (double x : breakpoints) {
    if (x > a && x < b) points.push_back(x);
  }
  Result r = adapt(f, std::move(points), opts);
  r.value *= sign;
  return r;
}

Result integrate_to_infinity(const Integrand& f,
                             std::span<const double> breakpoints,
                             double tail_scale, const Options& opts) {
  if (breakpoints.empty()) {
    throw DomainError("integrate_to_infinity: need at least the lower limit");
  }
  if (!(tail_scale > 0.0) || !std::isfinite(tail_scale)) {
    throw DomainError("integrate_to_infinity: tail scale must be positive");
  }
  std::vector<double> points(breakpoints.begin(), breakpoints.end());
  std::sort(points.begin(), points.end());
  const double x0 = points.back();
  // Finite part in x, tail in u = t - x0 on [0, 1).
  const Integrand g = [&](double t) {
    if (t <= x0) return f(t);
    const double u = t - x0;
    const double w = 1.0 - u;
    if (w <= 0.0) return 0.0;
    const double x = x0 + tail_scale * u / w;
    if (!std::isfinite(x)) return 0.0;
    return f(x) * tail_scale / (w * w);
  };
  points.push_back(x0 + 1.0);
  return adapt(g, std::move(points), opts);
}

}  // namespace rislink::quad
