#include "rislink/performance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "rislink/errors.hpp"
#include "rislink/quadrature.hpp"
#include "rislink/special_functions.hpp"

namespace rislink {
namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kPi = std::numbers::pi;

// Integrals here feed relative comparisons against values as small as 1e-12,
// so the absolute floor is effectively off.
const quad::Options kTight{1e-300, 1e-12, 4000};
// The water-filling residual is an O(1) quantity minus 1.
const quad::Options kResidual{1e-15, 5e-14, 4000};

void validate(const SnrModel& model) {
  if (!(model.approx.a > -1.0) || !std::isfinite(model.approx.a)) {
    throw DomainError("Gamma approximation needs a > -1");
  }
  if (!(model.approx.b > 0.0) || !std::isfinite(model.approx.b)) {
    throw DomainError("Gamma approximation needs b > 0");
  }
  if (!(model.gamma_bar > 0.0) || !std::isfinite(model.gamma_bar)) {
    throw DomainError("average SNR must be positive and finite");
  }
}

// Amplitude scale theta: sqrt(gamma) = theta * s with s ~ Gamma(a + 1, 1).
double amplitude_scale(const SnrModel& model) {
  return model.approx.b * std::sqrt(model.gamma_bar);
}

double gamma_density(double shape, double s) {
  if (s <= 0.0) return 0.0;
  return std::exp(special::log_gamma_prefactor(shape, s)) / s;
}

std::vector<double> gamma_breakpoints(double shape, double from) {
  const double mode = std::max(shape - 1.0, 0.0);
  const double sd = std::sqrt(shape);
  std::vector<double> pts{from};
  for (double k : {-10.0, -6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0, 10.0}) {
    const double x = mode + k * sd;
    if (x > from) pts.push_back(x);
  }
  return pts;
}

// E[g(S) 1{S > from}] for S ~ Gamma(shape, 1).
double gamma_expectation(double shape, const std::function<double(double)>& g,
                         double from, const quad::Options& opts) {
  const double sd = std::sqrt(shape);
  std::vector<double> pts = gamma_breakpoints(shape, from);
  if (pts.size() == 1) {
    // Cutoff past the bulk: the density decays from `from` onward.
    const double rate = std::max(1.0 - (shape - 1.0) / from, 1.0 / sd);
    pts.push_back(from + 1.0 / rate);
    pts.push_back(from + 10.0 / rate);
  }
  double total = 0.0;
  std::size_t first = 0;
  if (from == 0.0 && shape < 2.0) {
    // s = w^{1/shape} absorbs the s^{shape-1} endpoint behavior:
    // int_0^{s1} g f ds = int_0^{s1^shape} g(s) e^{-s} / Gamma(shape + 1) dw.
    const double s1 = pts[1];
    const double log_norm = special::ln_gamma(shape + 1.0);
    const auto h = [&](double w) {
      const double s = std::pow(w, 1.0 / shape);
      return g(s) * std::exp(-s - log_norm);
    };
    total += quad::integrate(h, 0.0, std::pow(s1, shape), {}, opts).value;
    first = 1;
  }
  const auto f = [&](double s) { return g(s) * gamma_density(shape, s); };
  const std::vector<double> rest(pts.begin() + static_cast<long>(first), pts.end());
  total += quad::integrate_to_infinity(f, rest, std::max(sd, 1.0), opts).value;
  return total;
}

double checked_capacity(double value, const char* what) {
  if (!std::isfinite(value) || value < -1e-12) {
    throw ConsistencyError(std::string(what) + ": closed form is negative or non-finite");
  }
  return std::max(value, 0.0);
}

// ln 2 * sqrt(pi) * Gamma(a + 1) / 2^a, as a negative log.
double capacity_log_prefactor(double a) {
  return a * std::log(2.0) - std::log(kLn2) - 0.5 * std::log(kPi) -
         special::ln_gamma(a + 1.0);
}

std::vector<double> capacity_upper_params(double a) {
  return {-0.5 * a, 0.5 * (1.0 - a), 1.0, 1.0};
}

}  // namespace

Modulation Modulation::mpam(int levels) {
  if (levels < 2) throw DomainError("M-PAM needs at least 2 levels");
  const double m = levels;
  return {2.0 * (m - 1.0) / m, 3.0 / (m * m - 1.0)};
}

void validate(const Modulation& mod) {
  if (!(mod.p > 0.0 && mod.p <= 2.0)) throw DomainError("modulation p must lie in (0, 2]");
  if (!(mod.q > 0.0) || !std::isfinite(mod.q)) throw DomainError("modulation q must be > 0");
}

double ClosedForm::evaluate(double rel_tol) const {
  const special::ScaledMeijerG g = special::meijer_g_scaled(kernel, rel_tol);
  if (g.mantissa == 0.0) return 0.0;
  return g.mantissa * std::exp(log_prefactor + g.log_scale);
}

ClosedForm asep_closed_form(const Modulation& mod, const SnrModel& model) {
  validate(mod);
  validate(model);
  const double a = model.approx.a;
  const double b = model.approx.b;
  ClosedForm cf;
  cf.log_prefactor = (a - 1.0) * std::log(2.0) + std::log(mod.p) - std::log(kPi) -
                     special::ln_gamma(a + 1.0);
  cf.kernel = {2, 3, {0.5, 0.5, 1.0}, {0.5 * (a + 1.0), 0.5 * (a + 2.0), 0.0, 0.5},
               1.0 / (4.0 * mod.q * model.gamma_bar * b * b)};
  return cf;
}

ClosedForm capacity_nocsi_closed_form(const SnrModel& model) {
  validate(model);
  const double a = model.approx.a;
  const double b = model.approx.b;
  ClosedForm cf;
  cf.log_prefactor = capacity_log_prefactor(a);
  cf.kernel = {1, 4, capacity_upper_params(a), {1.0, 0.0}, 4.0 * model.gamma_bar * b * b};
  return cf;
}

ClosedForm capacity_csi_closed_form(const SnrModel& model, double gamma0,
                                    CsiArgument argument) {
  validate(model);
  if (!(gamma0 > 0.0) || !std::isfinite(gamma0)) {
    throw DomainError("cutoff gamma0 must be positive");
  }
  const double a = model.approx.a;
  const double b = model.approx.b;
  const double scale = argument == CsiArgument::snr_scaled ? model.gamma_bar : 1.0;
  ClosedForm cf;
  cf.log_prefactor = capacity_log_prefactor(a);
  cf.kernel = {0, 4, capacity_upper_params(a), {0.0, 0.0}, 4.0 * scale * b * b / gamma0};
  return cf;
}

double asep_closed(const Modulation& mod, const SnrModel& model) {
  const double v = asep_closed_form(mod, model).evaluate();
  if (!std::isfinite(v) || v < -1e-9 || v > 1.0 + 1e-9) {
    throw ConsistencyError("asep_closed: closed form left [0, 1]");
  }
  return std::clamp(v, 0.0, 1.0);
}

double asep_quadrature(const Modulation& mod, const SnrModel& model) {
  validate(mod);
  validate(model);
  // (p sqrt(q) / sqrt(pi)) int_0^inf e^{-q t^2} F(t^2) dt with t = theta s.
  const double shape = model.approx.shape();
  const double theta = amplitude_scale(model);
  const double c = mod.q * theta * theta;
  const double g = 1.0 / std::sqrt(c);
  // Peak of e^{-c s^2} s^shape e^{-s} when the Gaussian cuts off the rise of P.
  const double peak = (std::sqrt(1.0 + 8.0 * c * shape) - 1.0) / (4.0 * c);
  const double width = 1.0 / std::sqrt(2.0 * c + shape / (peak * peak));

  std::vector<double> pts = gamma_breakpoints(shape, 0.0);
  for (double k : {-10.0, -6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0, 10.0}) {
    const double x = peak + k * width;
    if (x > 0.0) pts.push_back(x);
  }
  for (double k : {0.5, 1.0, 2.0, 3.0, 6.0, 10.0}) pts.push_back(k * g);
  std::sort(pts.begin(), pts.end());

  const auto f = [&](double s) {
    return std::exp(-c * s * s) * special::reg_lower_gamma(shape, s);
  };
  const double integral = quad::integrate_to_infinity(f, pts, g, kTight).value;
  return mod.p * std::sqrt(mod.q) * theta / std::sqrt(kPi) * integral;
}

double asep_quadrature(const Modulation& mod,
                       const std::function<double(double)>& snr_cdf_fn) {
  validate(mod);
  const double g = 1.0 / std::sqrt(mod.q);
  const std::vector<double> pts{0.0, g, 3.0 * g, 6.0 * g, 10.0 * g};
  const auto f = [&](double t) { return std::exp(-mod.q * t * t) * snr_cdf_fn(t * t); };
  const double integral = quad::integrate_to_infinity(f, pts, g, kTight).value;
  return mod.p * std::sqrt(mod.q) / std::sqrt(kPi) * integral;
}

double capacity_nocsi_closed(const SnrModel& model) {
  return checked_capacity(capacity_nocsi_closed_form(model).evaluate(), "capacity_nocsi_closed");
}

double capacity_nocsi_quadrature(const SnrModel& model) {
  validate(model);
  const double theta2 = amplitude_scale(model) * amplitude_scale(model);
  const auto g = [&](double s) { return std::log1p(theta2 * s * s); };
  return gamma_expectation(model.approx.shape(), g, 0.0, kTight) / kLn2;
}

double waterfill_residual(const SnrModel& model, double gamma0) {
  validate(model);
  if (!(gamma0 > 0.0) || !std::isfinite(gamma0)) {
    throw DomainError("cutoff gamma0 must be positive");
  }
  const double s0 = std::sqrt(gamma0) / amplitude_scale(model);
  // (1/gamma0 - 1/gamma) = (1 - (s0/s)^2) / gamma0
  const auto g = [&](double s) {
    const double r = s0 / s;
    return (1.0 - r * r) / gamma0;
  };
  return gamma_expectation(model.approx.shape(), g, s0, kResidual) - 1.0;
}

WaterFillSolution waterfill_cutoff(const SnrModel& model, double tol) {
  if (!(tol >= 1e-12 && tol <= 1e-6)) {
    throw DomainError("waterfill_cutoff: tol must lie in [1e-12, 1e-6]");
  }
  validate(model);
  double lo = 1e-12;
  double hi = 1.0;
  double r_lo = waterfill_residual(model, lo);
  double r_hi = waterfill_residual(model, hi);
  WaterFillSolution sol;
  if (!(r_lo > 0.0) || !(r_hi <= 0.0)) {
    throw SolverError("waterfill_cutoff: constraint residual does not change sign",
                      lo, hi, r_lo, r_hi);
  }
  if (std::abs(r_hi) <= tol) return {hi, r_hi, 0};

  // Bisection in log gamma0 until the bracket is narrow, then Newton with the
  // analytic derivative R'(g0) = -(1 - F(g0)) / g0^2, kept inside the bracket.
  int it = 0;
  double x = std::sqrt(lo * hi);
  double r = 0.0;
  for (; it < 200; ++it) {
    x = std::sqrt(lo * hi);
    r = waterfill_residual(model, x);
    if (std::abs(r) <= tol) return {x, r, it + 1};
    if (r > 0.0) {
      lo = x;
      r_lo = r;
    } else {
      hi = x;
      r_hi = r;
    }
    if (hi / lo < 1.05) break;
  }
  for (; it < 200; ++it) {
    const double slope = -snr_ccdf(model, x) / (x * x);
    double next = slope < 0.0 ? x - r / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
    r = waterfill_residual(model, x);
    if (std::abs(r) <= tol) return {x, r, it + 1};
    if (r > 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  throw SolverError("waterfill_cutoff: tolerance not reached", lo, hi, r_lo, r_hi);
}

double capacity_csi_closed(const SnrModel& model, double gamma0, CsiArgument argument) {
  return checked_capacity(capacity_csi_closed_form(model, gamma0, argument).evaluate(),
                          "capacity_csi_closed");
}

double capacity_csi_quadrature(const SnrModel& model, double gamma0) {
  validate(model);
  if (!(gamma0 > 0.0) || !std::isfinite(gamma0)) {
    throw DomainError("cutoff gamma0 must be positive");
  }
  const double s0 = std::sqrt(gamma0) / amplitude_scale(model);
  // ln(gamma / gamma0) = 2 ln(s / s0)
  const auto g = [&](double s) { return 2.0 * std::log1p((s - s0) / s0); };
  return gamma_expectation(model.approx.shape(), g, s0, kTight) / kLn2;
}

double power_policy(const SnrModel& model, double gamma0, double gamma) {
  validate(model);
  if (!(gamma > 0.0)) throw DomainError("power_policy: gamma must be > 0");
  if (!(gamma0 > 0.0)) throw DomainError("power_policy: gamma0 must be > 0");
  return gamma > gamma0 ? 1.0 / gamma0 - 1.0 / gamma : 0.0;
}

}  // namespace rislink
