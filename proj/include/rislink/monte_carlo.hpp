#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rislink/channel_model.hpp"
#include "rislink/performance.hpp"

namespace rislink {

struct SimConfig {
  CascadedLink link;
  double gamma_bar = 1.0;
  long long trials = 1;
  std::uint64_t seed = 0;
  int workers = 1;
  Modulation modulation = Modulation::bpsk();
  // The KS statistic keeps every amplitude sample and sorts them.
  bool compute_ks = true;
};

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
};

struct SimSummary {
  Estimate snr;
  Estimate capacity_nocsi;               // bits
  std::optional<Estimate> capacity_csi;  // needs gamma0
  Estimate asep;
  // Mean water-filling power 1/gamma0 - 1/gamma over all trials; needs gamma0.
  std::optional<Estimate> power;
  // Summed amplitude xi = sum_l alpha_l beta_l.
  Estimate sum_amplitude;
  double sum_amplitude_variance = 0.0;
  double sum_amplitude_variance_se = 0.0;
  // sup |F_empirical - F_model| of gamma; NaN when compute_ks is off.
  double ks_distance_vs_model = 0.0;
  long long trials_used = 0;
};

// |v + sigma (Z1 + i Z2)| with (Z1, Z2) from the Box-Muller transform of
// (u1, u2), u1, u2 in (0, 1].
double sample_rician(const RicianParams& params, double u1, double u2);

// Trials are cut into fixed-size blocks, each with its own Philox substream,
// and merged in block order, so the summary is a pure function of the config
// (worker count included) and gamma0.
SimSummary simulate(const SimConfig& config, std::optional<double> gamma0 = {});

// One simulation per average SNR over a shared set of channel draws;
// element i equals simulate() with gamma_bar = gamma_bars[i], gamma0s[i].
std::vector<SimSummary> simulate_sweep(const SimConfig& config,
                                       const std::vector<double>& gamma_bars,
                                       const std::vector<std::optional<double>>& gamma0s);

}  // namespace rislink
