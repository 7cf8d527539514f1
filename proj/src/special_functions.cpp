#include "rislink/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "rislink/errors.hpp"

namespace rislink::special {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPi = std::numbers::pi;
constexpr double kTiny = 1e-300;
constexpr double kBesselSeriesLimit = 15.0;
constexpr double kBesselOverflowGuard = 700.0;
constexpr int kMaxIterations = 100000;

void require_finite(double x, const char* fn) {
  if (!std::isfinite(x)) {
    throw DomainError(std::string(fn) + ": non-finite argument");
  }
}

void require_order01(int order, const char* fn) {
  if (order != 0 && order != 1) {
    throw DomainError(std::string(fn) + ": only orders 0 and 1 are supported");
  }
}

// I_order(x) for x >= 0 by the ascending series; every term is positive.
double bessel_i_series(int order, double x) {
  const double half = 0.5 * x;
  const double q = half * half;
  double term = order == 0 ? 1.0 : half;
  double sum = term;
  for (int k = 1; k < 1000; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k + order));
    sum += term;
    if (term <= 0.5 * kEps * sum) break;
  }
  return sum;
}

// e^{-x} I_order(x) for x > 15, Hankel expansion truncated at its smallest
// term.
double bessel_i_asymptotic_scaled(int order, double x) {
  const double mu = 4.0 * order * order;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * (mu - odd * odd) / (8.0 * k * x);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) <= kEps * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * kPi * x);
}

// Taylor coefficients of 1/Gamma(z) = sum_k c_k z^k, k = 1..28.
constexpr std::array<double, 29> kReciprocalGammaTaylor = {
    0.0,
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.042002635034095235529,
    0.1665386113822914895,
    -0.042197734555544336748,
    -0.0096219715278769735621,
    0.0072189432466630995424,
    -0.0011651675918590651121,
    -0.00021524167411495097282,
    0.00012805028238811618615,
    -0.000020134854780788238656,
    -1.2504934821426706573e-6,
    1.1330272319816958824e-6,
    -2.0563384169776071035e-7,
    6.1160951044814158179e-9,
    5.0020076444692229301e-9,
    -1.1812745704870201446e-9,
    1.0434267116911005105e-10,
    7.782263439905071254e-12,
    -3.6968056186422057082e-12,
    5.100370287454475979e-13,
    -2.0583260535665067832e-14,
    -5.3481225394230179824e-15,
    1.2267786282382607902e-15,
    -1.1812593016974587695e-16,
    1.1866922547516003326e-18,
    1.4123806553180317816e-18,
};

// Temme's gamma_1(mu) = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu) and
// gamma_2(mu) = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2 for |mu| <= 1/2.
struct TemmeGammas {
  double gam1;
  double gam2;
  double inv_gamma_plus;   // 1/Gamma(1+mu)
  double inv_gamma_minus;  // 1/Gamma(1-mu)
};

TemmeGammas temme_gammas(double mu) {
  const double mu2 = mu * mu;
  double odd = 0.0;
  double even = 0.0;
  double power = 1.0;
  // 1/Gamma(1+mu) = sum_k c_k mu^{k-1}; split into even/odd powers of mu.
  for (std::size_t k = 1; k < kReciprocalGammaTaylor.size(); k += 2) {
    odd += kReciprocalGammaTaylor[k] * power;
    if (k + 1 < kReciprocalGammaTaylor.size()) {
      even += kReciprocalGammaTaylor[k + 1] * power;
    }
    power *= mu2;
  }
  const double gam1 = -even;
  const double gam2 = odd;
  return {gam1, gam2, gam2 - mu * gam1, gam2 + mu * gam1};
}

struct ScaledValue {
  double mantissa;
  double log_scale;
};

// K_nu(x) = mantissa * exp(log_scale), nu >= 0, x > 0.
ScaledValue bessel_k_scaled(double nu, double x) {
  const int nl = static_cast<int>(nu + 0.5);
  const double mu = nu - nl;
  const double mu2 = mu * mu;
  const double xi = 1.0 / x;
  const double xi2 = 2.0 * xi;
  double k_mu = 0.0;
  double k_mu1 = 0.0;
  double log_scale = 0.0;

  if (x < 2.0) {
    const double x2 = 0.5 * x;
    const double pimu = kPi * mu;
    const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
    const TemmeGammas g = temme_gammas(mu);
    double ff = fact * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / g.inv_gamma_plus;
    double q = 0.5 / (e * g.inv_gamma_minus);
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    int i = 1;
    for (; i <= kMaxIterations; ++i) {
      ff = (i * ff + p + q) / (i * static_cast<double>(i) - mu2);
      c *= d / i;
      p /= i - mu;
      q /= i + mu;
      const double del = c * ff;
      sum += del;
      sum1 += c * (p - i * ff);
      if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    if (i > kMaxIterations) {
      throw ConvergenceError("bessel_k: Temme series did not converge", sum,
                             std::abs(sum));
    }
    k_mu = sum;
    k_mu1 = sum1 * xi2;
  } else {
    // Steed's algorithm for the CF2 continued fraction; exp(-x) is kept in
    // log_scale.
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25 - mu2;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    int i = 2;
    for (; i <= kMaxIterations; ++i) {
      a -= 2 * (i - 1);
      c = -a * c / i;
      const double qnew = (q1 - b * q2) / a;
      q1 = q2;
      q2 = qnew;
      q += c * qnew;
      b += 2.0;
      d = 1.0 / (b + a * d);
      delh = (b * d - 1.0) * delh;
      h += delh;
      const double dels = q * delh;
      s += dels;
      if (std::abs(dels / s) < kEps) break;
    }
    if (i > kMaxIterations) {
      throw ConvergenceError("bessel_k: continued fraction did not converge",
                             s, std::abs(s));
    }
    k_mu = std::sqrt(kPi / (2.0 * x)) / s;
    k_mu1 = k_mu * (mu + x + 0.5 - a1 * h) * xi;
    log_scale = -x;
  }

  constexpr double kRescale = 1e250;
  const double log_rescale = std::log(kRescale);
  for (int i = 1; i <= nl; ++i) {
    const double next = (mu + i) * xi2 * k_mu1 + k_mu;
    k_mu = k_mu1;
    k_mu1 = next;
    if (k_mu1 > kRescale) {
      k_mu /= kRescale;
      k_mu1 /= kRescale;
      log_scale += log_rescale;
    }
  }
  return {k_mu, log_scale};
}

void check_bessel_k_args(double order, double x) {
  require_finite(order, "bessel_k");
  require_finite(x, "bessel_k");
  if (x <= 0.0) throw DomainError("bessel_k: x must be positive");
}

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

template <class T>
T lanczos_ln_gamma(T z) {
  z -= 1.0;
  T series = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) {
    series += kLanczos[i] / (z + static_cast<double>(i));
  }
  const T t = z + (kLanczosG + 0.5);
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t +
         std::log(series);
}

// log sin(pi z) without overflow for large |Im z|.
std::complex<double> log_sin_pi(std::complex<double> z) {
  const std::complex<double> i_pi(0.0, kPi);
  if (z.imag() >= 0.0) {
    return -i_pi * z + std::log(1.0 - std::exp(2.0 * i_pi * z)) +
           std::log(std::complex<double>(0.0, 0.5));
  }
  return i_pi * z + std::log(1.0 - std::exp(-2.0 * i_pi * z)) -
         std::log(std::complex<double>(0.0, 2.0));
}

// Stirling remainder lnGamma(a) - [(a - 1/2) ln a - a + ln(2 pi)/2], a >= 10.
double stirling_correction(double a) {
  const double inv = 1.0 / a;
  const double inv2 = inv * inv;
  return inv *
         (1.0 / 12.0 -
          inv2 * (1.0 / 360.0 -
                  inv2 * (1.0 / 1260.0 -
                          inv2 * (1.0 / 1680.0 - inv2 * (1.0 / 1188.0)))));
}

void check_incomplete_gamma_args(double a, double x, const char* fn) {
  require_finite(a, fn);
  require_finite(x, fn);
  if (a <= 0.0) throw DomainError(std::string(fn) + ": a must be positive");
  if (x < 0.0) throw DomainError(std::string(fn) + ": x must be >= 0");
}

// sum_{n>=0} x^n / (a (a+1) ... (a+n)); P = series * exp(prefactor).
double lower_gamma_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int n = 0; n < kMaxIterations; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) return sum;
  }
  throw ConvergenceError("reg_lower_gamma: series did not converge", sum,
                         std::abs(del));
}

// Continued fraction for Q = cf * exp(prefactor) (modified Lentz).
double upper_gamma_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw ConvergenceError("reg_upper_gamma: continued fraction did not converge",
                         h, std::abs(h));
}

}  // namespace

double bessel_i(int order, double x) {
  require_order01(order, "bessel_i");
  require_finite(x, "bessel_i");
  const double ax = std::abs(x);
  if (ax >= kBesselOverflowGuard) {
    throw RangeError("bessel_i: |x| >= 700 overflows; use bessel_i_scaled");
  }
  const double value = ax <= kBesselSeriesLimit
                           ? bessel_i_series(order, ax)
                           : bessel_i_asymptotic_scaled(order, ax) * std::exp(ax);
  return (order == 1 && x < 0.0) ? -value : value;
}

double bessel_i_scaled(int order, double x) {
  require_order01(order, "bessel_i_scaled");
  require_finite(x, "bessel_i_scaled");
  const double ax = std::abs(x);
  const double value = ax <= kBesselSeriesLimit
                           ? bessel_i_series(order, ax) * std::exp(-ax)
                           : bessel_i_asymptotic_scaled(order, ax);
  return (order == 1 && x < 0.0) ? -value : value;
}

double bessel_k(double order, double x) {
  check_bessel_k_args(order, x);
  const ScaledValue v = bessel_k_scaled(std::abs(order), x);
  const double log_value = std::log(v.mantissa) + v.log_scale;
  if (log_value > std::log(std::numeric_limits<double>::max())) {
    throw RangeError("bessel_k: value overflows; use log_bessel_k");
  }
  return v.mantissa * std::exp(v.log_scale);
}

double log_bessel_k(double order, double x) {
  check_bessel_k_args(order, x);
  const ScaledValue v = bessel_k_scaled(std::abs(order), x);
  return std::log(v.mantissa) + v.log_scale;
}

double laguerre_half(double x) {
  require_finite(x, "laguerre_half");
  if (x > 0.0) throw DomainError("laguerre_half: x must be <= 0");
  // For x <= 0, e^{x/2} I_v(-x/2) is exactly the scaled Bessel function.
  const double y = -0.5 * x;
  return (1.0 - x) * bessel_i_scaled(0, y) - x * bessel_i_scaled(1, y);
}

double ln_gamma(double x) {
  require_finite(x, "ln_gamma");
  if (x <= 0.0) throw DomainError("ln_gamma: x must be positive");
  if (x < 0.5) {
    return std::log(kPi / std::sin(kPi * x)) - lanczos_ln_gamma(1.0 - x);
  }
  return lanczos_ln_gamma(x);
}

std::complex<double> ln_gamma(std::complex<double> z) {
  if (z.real() < 0.5) {
    return std::log(kPi) - log_sin_pi(z) - lanczos_ln_gamma(1.0 - z);
  }
  return lanczos_ln_gamma(z);
}

double log_gamma_prefactor(double a, double x) {
  if (x == 0.0) return -std::numeric_limits<double>::infinity();
  if (a < 10.0) return a * std::log(x) - x - ln_gamma(a);
  // a ln x - x - lnGamma(a) = -a (u - log1p(u)) + ln(a / 2pi) / 2 - corr(a),
  // u = (x - a) / a.
  const double u = (x - a) / a;
  return -a * (u - std::log1p(u)) + 0.5 * std::log(a / (2.0 * kPi)) -
         stirling_correction(a);
}

double reg_lower_gamma(double a, double x) {
  check_incomplete_gamma_args(a, x, "reg_lower_gamma");
  if (x == 0.0) return 0.0;
  const double log_pre = log_gamma_prefactor(a, x);
  if (x < a + 1.0) {
    return std::min(1.0, lower_gamma_series(a, x) * std::exp(log_pre));
  }
  return 1.0 - upper_gamma_fraction(a, x) * std::exp(log_pre);
}

double reg_upper_gamma(double a, double x) {
  check_incomplete_gamma_args(a, x, "reg_upper_gamma");
  if (x == 0.0) return 1.0;
  const double log_pre = log_gamma_prefactor(a, x);
  if (x < a + 1.0) {
    return std::max(0.0, 1.0 - lower_gamma_series(a, x) * std::exp(log_pre));
  }
  return upper_gamma_fraction(a, x) * std::exp(log_pre);
}

}  // namespace rislink::special
