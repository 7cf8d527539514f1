#include "rislink/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "rislink/errors.hpp"
#include "rislink/special_functions.hpp"

namespace rislink {
namespace {

// Above this K the Bessel form is replaced by its large-K expansion.
constexpr double kLargeK = 1e8;

struct HopMoments {
  double m;  // E[alpha] / sqrt(omega)
  double d;  // Var[alpha] / omega = 1 - m^2
};

HopMoments normalized_moments(double k) {
  if (std::isinf(k)) return {1.0, 0.0};
  if (k > kLargeK) {
    const double m = std::sqrt(k / (k + 1.0)) * (1.0 + 0.25 / k);
    const double d = (1.0 - 0.25 / k) / (2.0 * (k + 1.0));
    return {m, d};
  }
  const double half = 0.5 * k;
  const double m = 0.5 * std::sqrt(std::numbers::pi / (k + 1.0)) *
                   ((k + 1.0) * special::bessel_i_scaled(0, half) +
                    k * special::bessel_i_scaled(1, half));
  return {m, 1.0 - m * m};
}

}  // namespace

RicianParams RicianParams::from_sigma2(double k, double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw DomainError("RicianParams: sigma2 must be positive and finite");
  }
  if (!(k >= 0.0) || !std::isfinite(k)) {
    throw DomainError("RicianParams: fixed-sigma2 form needs finite K >= 0");
  }
  return {k, (k + 1.0) * 2.0 * sigma2};
}

double RicianParams::los_power() const {
  return std::isinf(k) ? omega : k * omega / (k + 1.0);
}

double RicianParams::nlos_power() const {
  return std::isinf(k) ? 0.0 : omega / (k + 1.0);
}

void validate(const RicianParams& p) {
  if (!(p.k >= 0.0)) throw DomainError("Rician K must be >= 0");
  if (!(p.omega > 0.0) || !std::isfinite(p.omega)) {
    throw DomainError("Rician omega must be positive and finite");
  }
}

void validate(const CascadedLink& link) {
  validate(link.hop1);
  validate(link.hop2);
  if (link.n_elements < 1) throw DomainError("element count N must be >= 1");
}

double mean_rician_envelope(const RicianParams& p) {
  validate(p);
  if (std::isinf(p.k)) return std::sqrt(p.omega);
  if (p.k > kLargeK) return std::sqrt(p.omega) * normalized_moments(p.k).m;
  return 0.5 * std::sqrt(p.omega * std::numbers::pi / (p.k + 1.0)) *
         special::laguerre_half(-p.k);
}

double mean_cascaded_element(const RicianParams& hop1, const RicianParams& hop2) {
  validate(hop1);
  validate(hop2);
  return std::sqrt(hop1.omega * hop2.omega) * normalized_moments(hop1.k).m *
         normalized_moments(hop2.k).m;
}

double var_cascaded_element(const RicianParams& hop1, const RicianParams& hop2) {
  validate(hop1);
  validate(hop2);
  // 1 - m1^2 m2^2 = d1 + d2 - d1 d2 keeps the small-variance regime exact.
  const double d1 = normalized_moments(hop1.k).d;
  const double d2 = normalized_moments(hop2.k).d;
  const double v = hop1.omega * hop2.omega * (d1 + d2 - d1 * d2);
  if (!(v > 0.0)) {
    throw ConsistencyError("cascaded element variance is not positive");
  }
  return v;
}

GammaApprox laguerre_params(const CascadedLink& link) {
  validate(link);
  const double mean = mean_cascaded_element(link.hop1, link.hop2);
  const double var = var_cascaded_element(link.hop1, link.hop2);
  return {link.n_elements * mean * mean / var - 1.0, var / mean};
}

SnrModel make_snr_model(const CascadedLink& link, double gamma_bar) {
  if (!(gamma_bar > 0.0) || !std::isfinite(gamma_bar)) {
    throw DomainError("average SNR must be positive and finite");
  }
  return {laguerre_params(link), gamma_bar};
}

double sum_amplitude_pdf(const GammaApprox& g, double y) {
  if (!(y >= 0.0) || !std::isfinite(y)) throw DomainError("amplitude must be >= 0");
  if (y == 0.0) {
    if (g.a > 0.0) return 0.0;
    if (g.a == 0.0) return 1.0 / g.b;
    return std::numeric_limits<double>::infinity();
  }
  // y^a e^{-y/b} / (b^{a+1} Gamma(a+1)) = prefactor(a+1, y/b) / y
  return std::exp(special::log_gamma_prefactor(g.shape(), y / g.b)) / y;
}

double snr_pdf(const SnrModel& model, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("snr_pdf: gamma must be > 0");
  const double x = std::sqrt(gamma / model.gamma_bar) / model.approx.b;
  // f_xi(y) / (2 sqrt(gamma gamma_bar)) with y = sqrt(gamma / gamma_bar).
  return std::exp(special::log_gamma_prefactor(model.approx.shape(), x)) / (2.0 * gamma);
}

double snr_cdf(const SnrModel& model, double gamma) {
  if (!(gamma >= 0.0) || std::isnan(gamma)) throw DomainError("snr_cdf: gamma must be >= 0");
  if (std::isinf(gamma)) return 1.0;
  return special::reg_lower_gamma(model.approx.shape(),
                                  std::sqrt(gamma / model.gamma_bar) / model.approx.b);
}

double snr_ccdf(const SnrModel& model, double gamma) {
  if (!(gamma >= 0.0) || std::isnan(gamma)) throw DomainError("snr_ccdf: gamma must be >= 0");
  if (std::isinf(gamma)) return 0.0;
  return special::reg_upper_gamma(model.approx.shape(),
                                  std::sqrt(gamma / model.gamma_bar) / model.approx.b);
}

ProductPdfResult product_pdf_exact(const RicianParams& hop1, const RicianParams& hop2,
                                   double y, int truncation) {
  validate(hop1);
  validate(hop2);
  if (std::isinf(hop1.k) || std::isinf(hop2.k)) {
    throw DomainError("product_pdf_exact: K must be finite");
  }
  if (!(y > 0.0) || !std::isfinite(y)) throw DomainError("product_pdf_exact: y must be > 0");
  if (truncation < 1 || truncation > 60) {
    throw DomainError("product_pdf_exact: truncation must lie in [1, 60]");
  }
  const double k1 = hop1.k;
  const double k2 = hop2.k;
  const double log_aa = std::log((k1 + 1.0) / hop1.omega) + std::log((k2 + 1.0) / hop2.omega);
  const double arg = 2.0 * y * std::exp(0.5 * log_aa);
  const double log_y = std::log(y);
  const int imax = k2 > 0.0 ? truncation : 1;
  const int jmax = k1 > 0.0 ? truncation : 1;

  struct Term {
    double log_value;
    bool outer;
  };
  std::vector<Term> terms;
  terms.reserve(static_cast<std::size_t>(imax) * jmax);
  double peak = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < imax; ++i) {
    for (int j = 0; j < jmax; ++j) {
      double l = -(k1 + k2) + std::log(4.0) + 0.5 * (i + j + 2) * log_aa +
                 (i + j + 1) * log_y - 2.0 * special::ln_gamma(i + 1.0) -
                 2.0 * special::ln_gamma(j + 1.0) + special::log_bessel_k(j - i, arg);
      if (j > 0) l += j * std::log(k1);
      if (i > 0) l += i * std::log(k2);
      terms.push_back({l, std::max(i, j) == truncation - 1});
      peak = std::max(peak, l);
    }
  }
  double total = 0.0;
  double outer = 0.0;
  for (const Term& t : terms) {
    const double v = std::exp(t.log_value - peak);
    total += v;
    if (t.outer) outer += v;
  }
  ProductPdfResult r;
  r.value = total * std::exp(peak);
  r.last_term_ratio = total > 0.0 ? outer / total : 0.0;
  // With K = 0 on both hops the series is the single exact term.
  if (k1 == 0.0 && k2 == 0.0) r.last_term_ratio = 0.0;
  r.converged = r.last_term_ratio <= 1e-8;
  return r;
}

}  // namespace rislink
