#pragma once

#include <functional>

#include "rislink/channel_model.hpp"
#include "rislink/meijer_g.hpp"

namespace rislink {

// Conditional symbol error kernel p * Q(sqrt(2 q gamma)).
struct Modulation {
  double p = 1.0;
  double q = 1.0;

  static Modulation bpsk() { return {1.0, 1.0}; }
  static Modulation qpsk() { return {2.0, 0.5}; }
  // Pulse amplitude modulation with M levels.
  static Modulation mpam(int levels);
};

// Throws DomainError unless p in (0, 2] and q > 0.
void validate(const Modulation& mod);

struct WaterFillSolution {
  double gamma0 = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

// Which argument the CSI capacity G-function receives: 4 b^2 / gamma0 as
// published, or 4 gamma_bar b^2 / gamma0, the form consistent with the
// underlying integral.
enum class CsiArgument { literal, snr_scaled };

// prefactor * G(kernel), with the prefactor carried as a logarithm.
struct ClosedForm {
  double log_prefactor = 0.0;
  special::MeijerGSpec kernel;

  double evaluate(double rel_tol = 1e-10) const;
};

ClosedForm asep_closed_form(const Modulation& mod, const SnrModel& model);
ClosedForm capacity_nocsi_closed_form(const SnrModel& model);
ClosedForm capacity_csi_closed_form(const SnrModel& model, double gamma0,
                                    CsiArgument argument = CsiArgument::literal);

// Average symbol error probability.
double asep_closed(const Modulation& mod, const SnrModel& model);
double asep_quadrature(const Modulation& mod, const SnrModel& model);
// Same CDF-form integral for an arbitrary SNR CDF.
double asep_quadrature(const Modulation& mod,
                       const std::function<double(double)>& snr_cdf_fn);

// Ergodic capacity at constant transmit power, bits per channel use.
double capacity_nocsi_closed(const SnrModel& model);
double capacity_nocsi_quadrature(const SnrModel& model);

// E[(1/gamma0 - 1/gamma) 1{gamma > gamma0}] - 1; decreasing in gamma0.
double waterfill_residual(const SnrModel& model, double gamma0);
// Cutoff of the optimal power policy: |residual| <= tol, gamma0 in (0, 1].
WaterFillSolution waterfill_cutoff(const SnrModel& model, double tol = 1e-12);

// Ergodic capacity with transmitter CSI and optimal power control.
double capacity_csi_closed(const SnrModel& model, double gamma0,
                           CsiArgument argument = CsiArgument::literal);
double capacity_csi_quadrature(const SnrModel& model, double gamma0);

// P(gamma) / P_av = 1/gamma0 - 1/gamma above the cutoff, 0 below.
double power_policy(const SnrModel& model, double gamma0, double gamma);

}  // namespace rislink
