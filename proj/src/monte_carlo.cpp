#include "rislink/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>

#include "rislink/errors.hpp"
#include "rislink/rng.hpp"
#include "rislink/special_functions.hpp"

namespace rislink {
namespace {

constexpr long long kBlockTrials = 16384;

// Running mean and second central moment (Welford), mergeable with the
// pairwise update of Chan et al.
struct Welford {
  long long n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }

  void merge(const Welford& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(n);
    const double nb = static_cast<double>(o.n);
    const double total = na + nb;
    const double delta = o.mean - mean;
    mean += delta * nb / total;
    m2 += o.m2 + delta * delta * na * nb / total;
    n += o.n;
  }

  Estimate estimate() const {
    if (n < 2) return {mean, 0.0};
    const double nn = static_cast<double>(n);
    return {mean, std::sqrt(m2 / (nn - 1.0) / nn)};
  }
};

// Central moments up to the fourth (Pebay's one-pass and merge formulas),
// for the standard error of the sample variance.
struct FourMoments {
  long long n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;

  void add(double x) {
    const double n1 = static_cast<double>(n);
    ++n;
    const double nn = static_cast<double>(n);
    const double delta = x - mean;
    const double dn = delta / nn;
    const double dn2 = dn * dn;
    const double term1 = delta * dn * n1;
    mean += dn;
    m4 += term1 * dn2 * (nn * nn - 3.0 * nn + 3.0) + 6.0 * dn2 * m2 - 4.0 * dn * m3;
    m3 += term1 * dn * (nn - 2.0) - 3.0 * dn * m2;
    m2 += term1;
  }

  void merge(const FourMoments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(n);
    const double nb = static_cast<double>(o.n);
    const double nt = na + nb;
    const double d = o.mean - mean;
    const double d2 = d * d;
    const double d3 = d2 * d;
    const double d4 = d2 * d2;
    const double m4_new = m4 + o.m4 + d4 * na * nb * (na * na - na * nb + nb * nb) / (nt * nt * nt) +
                          6.0 * d2 * (na * na * o.m2 + nb * nb * m2) / (nt * nt) +
                          4.0 * d * (na * o.m3 - nb * m3) / nt;
    const double m3_new = m3 + o.m3 + d3 * na * nb * (na - nb) / (nt * nt) +
                          3.0 * d * (na * o.m2 - nb * m2) / nt;
    m2 += o.m2 + d2 * na * nb / nt;
    m3 = m3_new;
    m4 = m4_new;
    mean += d * nb / nt;
    n += o.n;
  }
};

struct PointAccumulator {
  Welford snr;
  Welford capacity;
  Welford capacity_csi;
  Welford asep;
  Welford power;

  void merge(const PointAccumulator& o) {
    snr.merge(o.snr);
    capacity.merge(o.capacity);
    capacity_csi.merge(o.capacity_csi);
    asep.merge(o.asep);
    power.merge(o.power);
  }
};

struct BlockResult {
  FourMoments xi;
  std::vector<PointAccumulator> points;
};

void validate(const SimConfig& c) {
  validate(c.link);
  validate(c.modulation);
  if (c.trials < 1) throw DomainError("simulation needs trials >= 1");
  if (c.workers < 1) throw DomainError("simulation needs workers >= 1");
}

}  // namespace

double sample_rician(const RicianParams& params, double u1, double u2) {
  const double v = std::sqrt(params.los_power());
  const double sigma = std::sqrt(0.5 * params.nlos_power());
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return std::hypot(v + sigma * r * std::cos(angle), sigma * r * std::sin(angle));
}

std::vector<SimSummary> simulate_sweep(const SimConfig& config,
                                       const std::vector<double>& gamma_bars,
                                       const std::vector<std::optional<double>>& gamma0s) {
  validate(config);
  if (gamma_bars.size() != gamma0s.size()) {
    throw DomainError("simulate_sweep: one cutoff slot per average SNR required");
  }
  for (double g : gamma_bars) {
    if (!(g > 0.0) || !std::isfinite(g)) throw DomainError("average SNR must be positive");
  }
  for (const auto& g0 : gamma0s) {
    if (g0 && !(*g0 > 0.0)) throw DomainError("cutoff gamma0 must be positive");
  }

  const CascadedLink& link = config.link;
  const Modulation mod = config.modulation;
  const long long trials = config.trials;
  const long long blocks = (trials + kBlockTrials - 1) / kBlockTrials;
  const std::size_t npoints = gamma_bars.size();
  std::vector<BlockResult> results(static_cast<std::size_t>(blocks));
  std::vector<double> xi_samples;
  if (config.compute_ks) xi_samples.resize(static_cast<std::size_t>(trials));

  const auto run_block = [&](long long block) {
    BlockResult& out = results[static_cast<std::size_t>(block)];
    out.points.assign(npoints, {});
    rng::UniformPairStream stream(config.seed, static_cast<std::uint64_t>(block));
    const long long begin = block * kBlockTrials;
    const long long end = std::min(trials, begin + kBlockTrials);
    for (long long t = begin; t < end; ++t) {
      double xi = 0.0;
      for (int l = 0; l < link.n_elements; ++l) {
        const auto ua = stream.next_pair();
        const auto ub = stream.next_pair();
        xi += sample_rician(link.hop1, ua[0], ua[1]) * sample_rician(link.hop2, ub[0], ub[1]);
      }
      out.xi.add(xi);
      if (config.compute_ks) xi_samples[static_cast<std::size_t>(t)] = xi;
      const double xi2 = xi * xi;
      for (std::size_t k = 0; k < npoints; ++k) {
        PointAccumulator& acc = out.points[k];
        const double gamma = gamma_bars[k] * xi2;
        acc.snr.add(gamma);
        acc.capacity.add(std::log2(1.0 + gamma));
        acc.asep.add(0.5 * mod.p * std::erfc(std::sqrt(mod.q * gamma)));
        if (const auto& g0 = gamma0s[k]) {
          const bool above = gamma > *g0;
          acc.capacity_csi.add(above ? std::log2(gamma / *g0) : 0.0);
          acc.power.add(above ? 1.0 / *g0 - 1.0 / gamma : 0.0);
        }
      }
    }
  };

  const int workers = static_cast<int>(std::min<long long>(config.workers, blocks));
  if (workers <= 1) {
    for (long long b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::atomic<long long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        try {
          for (long long b = next++; b < blocks; b = next++) run_block(b);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  // Merge in block order: the reduction tree does not depend on scheduling.
  FourMoments xi;
  std::vector<PointAccumulator> totals(npoints);
  for (const BlockResult& r : results) {
    xi.merge(r.xi);
    for (std::size_t k = 0; k < npoints; ++k) totals[k].merge(r.points[k]);
  }

  double ks = std::numeric_limits<double>::quiet_NaN();
  // A link with no fading on either hop has no Gamma model to compare with.
  const bool has_model = std::isfinite(link.hop1.k) || std::isfinite(link.hop2.k);
  if (config.compute_ks && has_model) {
    const GammaApprox approx = laguerre_params(link);
    std::sort(xi_samples.begin(), xi_samples.end());
    const double n = static_cast<double>(trials);
    ks = 0.0;
    for (std::size_t i = 0; i < xi_samples.size(); ++i) {
      // F_gamma(gamma_bar xi^2) = P(a + 1, xi / b) for every gamma_bar.
      const double f = special::reg_lower_gamma(approx.shape(), xi_samples[i] / approx.b);
      ks = std::max({ks, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
  }

  const double nn = static_cast<double>(xi.n);
  const double var = xi.n > 1 ? xi.m2 / (nn - 1.0) : 0.0;
  double var_se = 0.0;
  if (xi.n > 3) {
    const double mu4 = xi.m4 / nn;
    const double s4 = var * var;
    var_se = std::sqrt(std::max(0.0, (mu4 - s4 * (nn - 3.0) / (nn - 1.0)) / nn));
  }

  std::vector<SimSummary> out(npoints);
  for (std::size_t k = 0; k < npoints; ++k) {
    SimSummary& s = out[k];
    s.snr = totals[k].snr.estimate();
    s.capacity_nocsi = totals[k].capacity.estimate();
    s.asep = totals[k].asep.estimate();
    if (gamma0s[k]) {
      s.capacity_csi = totals[k].capacity_csi.estimate();
      s.power = totals[k].power.estimate();
    }
    s.sum_amplitude = {xi.mean, xi.n > 1 ? std::sqrt(var / nn) : 0.0};
    s.sum_amplitude_variance = var;
    s.sum_amplitude_variance_se = var_se;
    s.ks_distance_vs_model = ks;
    s.trials_used = xi.n;
  }
  return out;
}

SimSummary simulate(const SimConfig& config, std::optional<double> gamma0) {
  return simulate_sweep(config, {config.gamma_bar}, {gamma0}).front();
}

}  // namespace rislink
