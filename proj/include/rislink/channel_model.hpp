#pragma once

namespace rislink {

// One hop's Rician envelope: K is the LoS-to-scatter power ratio v^2/(2s^2),
// omega the mean-square envelope E[alpha^2] = v^2 + 2s^2. K may be +inf
// (deterministic amplitude sqrt(omega)).
struct RicianParams {
  double k = 0.0;
  double omega = 1.0;

  // Fixes the scattered power 2*sigma2 instead of omega, so omega grows with K.
  static RicianParams from_sigma2(double k, double sigma2);

  double los_power() const;   // v^2 = K omega / (K + 1)
  double nlos_power() const;  // 2 sigma^2 = omega / (K + 1)
};

// AP -> RIS (hop1) and RIS -> user (hop2), N co-phased reflecting elements.
struct CascadedLink {
  RicianParams hop1;
  RicianParams hop2;
  int n_elements = 1;
};

// Gamma approximation of the summed amplitude xi: shape a + 1, scale b.
struct GammaApprox {
  double a = 0.0;
  double b = 1.0;
  double shape() const { return a + 1.0; }
};

// SNR gamma = gamma_bar * xi^2.
struct SnrModel {
  GammaApprox approx;
  double gamma_bar = 1.0;
};

// Throws DomainError on K < 0, NaN, omega <= 0 or non-finite.
void validate(const RicianParams& p);
void validate(const CascadedLink& link);

// E[alpha] for one hop, (1/2) sqrt(omega pi / (K + 1)) L_{1/2}(-K).
double mean_rician_envelope(const RicianParams& p);

// E[alpha beta] for independent hops, expanded Bessel form.
double mean_cascaded_element(const RicianParams& hop1, const RicianParams& hop2);

// omega1 omega2 - E[alpha beta]^2, evaluated without cancellation. Throws
// ConsistencyError if the result is not positive (possible only for K = inf
// on both hops).
double var_cascaded_element(const RicianParams& hop1, const RicianParams& hop2);

GammaApprox laguerre_params(const CascadedLink& link);
SnrModel make_snr_model(const CascadedLink& link, double gamma_bar);

// Density of gamma; gamma > 0 (DomainError otherwise).
double snr_pdf(const SnrModel& model, double gamma);
// P(a + 1, sqrt(gamma / gamma_bar) / b); gamma >= 0.
double snr_cdf(const SnrModel& model, double gamma);
// 1 - snr_cdf, without cancellation in the upper tail.
double snr_ccdf(const SnrModel& model, double gamma);

// Gamma density of the summed amplitude xi.
double sum_amplitude_pdf(const GammaApprox& approx, double y);

struct ProductPdfResult {
  double value = 0.0;
  bool converged = false;
  // Share of the value contributed by the outermost retained terms.
  double last_term_ratio = 0.0;
};

// Exact density of one element's amplitude alpha * beta as a double series
// in modified Bessel K, indices 0 .. truncation - 1 (truncation in [1, 60]).
// Flags converged = false when the outermost terms exceed 1e-8 of the total.
ProductPdfResult product_pdf_exact(const RicianParams& hop1,
                                   const RicianParams& hop2, double y,
                                   int truncation = 40);

}  // namespace rislink
