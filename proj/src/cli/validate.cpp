#include "cli/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "cli/parallel.hpp"
#include "cli/sweep.hpp"

namespace rislink::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double evaluate_perturbed(ClosedForm cf, double delta) {
  cf.kernel.b[0] += delta;
  try {
    return cf.evaluate();
  } catch (const std::exception&) {
    return kNaN;
  }
}

bool within_rel(double value, double reference, double tol) {
  return std::isfinite(value) && relative_error(value, reference) <= tol;
}

double ks_limit(int n) { return n >= 2 ? 0.02 : 0.05; }

struct Tally {
  int pass = 0;
  int total = 0;
  double worst = 0.0;
  void add(std::optional<bool> ok, double metric = 0.0) {
    if (!ok) return;
    ++total;
    if (*ok) ++pass;
    if (std::isfinite(metric)) {
      worst = std::max(worst, metric);
    } else {
      worst = std::numeric_limits<double>::infinity();
    }
  }
};

}  // namespace

double relative_error(double value, double reference) {
  if (reference == 0.0) return std::abs(value);
  return std::abs(value - reference) / std::abs(reference);
}

bool CellReport::asep_match() const {
  return asep_quad <= kAsepFloor || within_rel(asep_closed, asep_quad, kClosedFormRelTol);
}
bool CellReport::nocsi_match() const {
  return within_rel(cap_nocsi_closed, cap_nocsi_quad, kClosedFormRelTol);
}
bool CellReport::csi_literal_match() const {
  return within_rel(csi_literal, csi_quad, kClosedFormRelTol);
}
bool CellReport::csi_scaled_match() const {
  return within_rel(csi_scaled, csi_quad, kClosedFormRelTol);
}
bool CellReport::cutoff_ok() const {
  return gamma0 > 0.0 && gamma0 <= 1.0 && std::abs(residual) < kResidualTol;
}

std::optional<bool> CellReport::ks_ok() const {
  if (!mc) return std::nullopt;
  return mc->ks < ks_limit(n);
}

std::optional<bool> CellReport::asep_mc_ok(long long trials) const {
  if (!mc || asep_quad <= kAsepMcFloor) return std::nullopt;
  const double se = std::sqrt(asep_quad * (1.0 - asep_quad) / static_cast<double>(trials));
  return std::abs(mc->asep.mean - asep_quad) <= kAsepMcSigmas * se;
}

std::optional<bool> CellReport::capacity_mc_ok() const {
  if (!mc) return std::nullopt;
  return relative_error(mc->capacity_nocsi.mean, cap_nocsi_quad) <= kCapacityMcRel;
}

std::optional<bool> CellReport::capacity_csi_mc_ok() const {
  if (!mc) return std::nullopt;
  return relative_error(mc->capacity_csi.mean, csi_quad) <= kCapacityMcRel;
}

std::optional<bool> CellReport::power_mc_ok() const {
  if (!mc) return std::nullopt;
  return std::abs(mc->power.mean - 1.0) <= kPowerMcSigmas * mc->power.std_error;
}

int ValidateReport::exit_code() const {
  if (strict && closed_form_mismatch) return 3;
  if (check_failed) return 2;
  return 0;
}

ValidateReport run_validation(const ValidateOptions& opts) {
  ValidateReport report;
  report.strict = opts.strict;
  report.mc_trials = opts.skip_mc ? 0 : opts.mc_trials;
  for (int n : opts.grid_n) {
    for (double k : opts.grid_k) {
      for (double db : opts.grid_snr_db) {
        CellReport c;
        c.n = n;
        c.k = k;
        c.snr_db = db;
        report.cells.push_back(c);
      }
    }
  }

  const auto link_of = [&](const CellReport& c) {
    const RicianParams hop = RicianParams::from_sigma2(c.k, opts.sigma2);
    return CascadedLink{hop, hop, c.n};
  };

  parallel_for(report.cells.size(), opts.jobs, [&](std::size_t i) {
    CellReport& c = report.cells[i];
    try {
      const SnrModel model = make_snr_model(link_of(c), db_to_linear(c.snr_db));
      const double delta = opts.perturb_meijer;
      c.asep_closed = evaluate_perturbed(asep_closed_form(opts.modulation, model), delta);
      c.asep_quad = asep_quadrature(opts.modulation, model);
      c.cap_nocsi_closed = evaluate_perturbed(capacity_nocsi_closed_form(model), delta);
      c.cap_nocsi_quad = capacity_nocsi_quadrature(model);
      const WaterFillSolution wf = waterfill_cutoff(model);
      c.gamma0 = wf.gamma0;
      c.residual = wf.residual;
      c.csi_literal = evaluate_perturbed(
          capacity_csi_closed_form(model, wf.gamma0, CsiArgument::literal), delta);
      c.csi_scaled = evaluate_perturbed(
          capacity_csi_closed_form(model, wf.gamma0, CsiArgument::snr_scaled), delta);
      c.csi_quad = capacity_csi_quadrature(model, wf.gamma0);
    } catch (const std::exception& e) {
      throw GridPointError("N=" + std::to_string(c.n) + " K=" + format_number(c.k) + " at " +
                           format_number(c.snr_db) + " dB: " + e.what());
    }
  });

  if (!opts.skip_mc) {
    // One set of channel draws per (N, K), shared across the SNR points.
    const std::size_t per_link = opts.grid_snr_db.size();
    for (std::size_t first = 0; first < report.cells.size(); first += per_link) {
      SimConfig config;
      config.link = link_of(report.cells[first]);
      config.trials = opts.mc_trials;
      config.seed = opts.seed;
      config.workers = std::max(opts.jobs, 1);
      config.modulation = opts.modulation;
      config.compute_ks = true;
      std::vector<double> gamma_bars;
      std::vector<std::optional<double>> cutoffs;
      for (std::size_t j = 0; j < per_link; ++j) {
        gamma_bars.push_back(db_to_linear(report.cells[first + j].snr_db));
        cutoffs.emplace_back(report.cells[first + j].gamma0);
      }
      const auto sims = simulate_sweep(config, gamma_bars, cutoffs);
      for (std::size_t j = 0; j < per_link; ++j) {
        const SimSummary& s = sims[j];
        report.cells[first + j].mc =
            McCell{s.asep, s.capacity_nocsi, *s.capacity_csi, *s.power, s.ks_distance_vs_model};
      }
    }
  }

  for (const CellReport& c : report.cells) {
    if (!c.asep_match() || !c.nocsi_match() || !(c.csi_literal_match() || c.csi_scaled_match())) {
      report.closed_form_mismatch = true;
    }
    bool ok = c.cutoff_ok();
    for (auto check : {c.ks_ok(), c.asep_mc_ok(report.mc_trials), c.capacity_mc_ok(),
                       c.capacity_csi_mc_ok(), c.power_mc_ok()}) {
      if (check && !*check) ok = false;
    }
    if (!ok) report.check_failed = true;
  }
  return report;
}

void print_report(std::ostream& out, const ValidateReport& report, const ValidateOptions& opts,
                  bool color) {
  const auto mark = [&](std::optional<bool> ok) -> std::string {
    if (!ok) return "  - ";
    if (!color) return *ok ? "pass" : "FAIL";
    return *ok ? "\033[32mpass\033[0m" : "\033[31mFAIL\033[0m";
  };
  const auto sci = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%9.2e", v);
    return std::string(buf);
  };
  const auto fix = [](double v, int w, int prec) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%*.*f", w, prec, v);
    return std::string(buf);
  };

  out << "validation grid: " << report.cells.size() << " cells, sigma2=" << format_number(opts.sigma2)
      << ", modulation p=" << format_number(opts.modulation.p)
      << " q=" << format_number(opts.modulation.q) << '\n';
  out << "closed form vs quadrature, relative error (tolerance " << sci(kClosedFormRelTol) << ")\n";
  out << "  csi-pub: G-function argument 4*b^2/gamma0 as published\n";
  out << "  csi-snr: G-function argument 4*gamma_bar*b^2/gamma0\n";
  if (report.mc_trials > 0) {
    out << "sampling checks: " << report.mc_trials << " trials per (N, K), seed " << opts.seed
        << "\n  ks: sup|F_mc - F_model| < " << ks_limit(2) << " (N>=2), < " << ks_limit(1)
        << " (N=1)\n  asep-z: (mc - quad) / binomial SE, |z| <= " << kAsepMcSigmas
        << " where asep > " << sci(kAsepMcFloor)
        << "\n  cap%, csi%: |mc - quad| / quad in percent, <= " << 100 * kCapacityMcRel
        << "\n  pow-z: (mean water-filling power - 1) / SE, |z| <= " << kPowerMcSigmas << '\n';
  }
  out << '\n';
  out << "  N     K    dB       asep  asep-err   nocsi-err  gamma0  residual   csi-pub   csi-snr";
  if (report.mc_trials > 0) out << "     ks   asep-z   cap%   csi%     pow-z";
  out << "  status\n";

  for (const CellReport& c : report.cells) {
    bool ok = c.cutoff_ok();
    out << fix(c.n, 3, 0) << fix(c.k, 6, 1) << fix(c.snr_db, 6, 1) << ' ' << sci(c.asep_quad)
        << ' ' << sci(relative_error(c.asep_closed, c.asep_quad)) << "   "
        << sci(relative_error(c.cap_nocsi_closed, c.cap_nocsi_quad)) << ' ' << fix(c.gamma0, 7, 4)
        << ' ' << sci(c.residual) << ' ' << sci(relative_error(c.csi_literal, c.csi_quad)) << ' '
        << sci(relative_error(c.csi_scaled, c.csi_quad));
    if (c.mc) {
      const double se = std::sqrt(c.asep_quad * (1.0 - c.asep_quad) /
                                  static_cast<double>(report.mc_trials));
      const double asep_z = se > 0.0 ? (c.mc->asep.mean - c.asep_quad) / se : 0.0;
      const double pow_z = c.mc->power.std_error > 0.0
                               ? (c.mc->power.mean - 1.0) / c.mc->power.std_error
                               : 0.0;
      out << ' ' << fix(c.mc->ks, 6, 4) << ' '
          << (c.asep_quad > kAsepMcFloor ? fix(asep_z, 8, 1) : std::string("       -")) << ' '
          << fix(100 * relative_error(c.mc->capacity_nocsi.mean, c.cap_nocsi_quad), 6, 2) << ' '
          << fix(100 * relative_error(c.mc->capacity_csi.mean, c.csi_quad), 6, 2) << ' '
          << fix(pow_z, 9, 1);
      for (auto check : {c.ks_ok(), c.asep_mc_ok(report.mc_trials), c.capacity_mc_ok(),
                         c.capacity_csi_mc_ok(), c.power_mc_ok()}) {
        if (check && !*check) ok = false;
      }
    }
    out << "  " << mark(ok) << '\n';
  }

  Tally asep, nocsi, lit, scaled, cutoff, ks, asep_mc, cap_mc, csi_mc, power_mc;
  for (const CellReport& c : report.cells) {
    if (c.asep_quad > kAsepFloor) {
      asep.add(c.asep_match(), relative_error(c.asep_closed, c.asep_quad));
    }
    nocsi.add(c.nocsi_match(), relative_error(c.cap_nocsi_closed, c.cap_nocsi_quad));
    lit.add(c.csi_literal_match(), relative_error(c.csi_literal, c.csi_quad));
    scaled.add(c.csi_scaled_match(), relative_error(c.csi_scaled, c.csi_quad));
    cutoff.add(c.cutoff_ok(), std::abs(c.residual));
    if (c.mc && c.snr_db == report.cells.front().snr_db) ks.add(c.ks_ok(), c.mc->ks);
    asep_mc.add(c.asep_mc_ok(report.mc_trials));
    cap_mc.add(c.capacity_mc_ok());
    csi_mc.add(c.capacity_csi_mc_ok());
    power_mc.add(c.power_mc_ok());
  }
  const auto line = [&](const char* name, const Tally& t, bool show_worst, const char* note) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "  %-44s %3d/%-3d", name, t.pass, t.total);
    out << buf;
    if (show_worst) out << "  worst " << sci(t.worst);
    out << "  " << mark(t.total == 0 ? std::nullopt : std::optional<bool>(t.pass == t.total));
    if (note && t.pass != t.total) out << "  " << note;
    out << '\n';
  };

  out << "\nclosed forms vs quadrature\n";
  line("asep", asep, true, "closed form diverges from quadrature");
  line("capacity without CSI", nocsi, true, "closed form diverges from quadrature");
  line("capacity with CSI, published argument", lit, true,
       "published argument diverges from quadrature");
  line("capacity with CSI, snr-scaled argument", scaled, true,
       "snr-scaled argument diverges from quadrature");
  out << "\nchecks\n";
  line("water-filling cutoff (|residual| < 1e-9)", cutoff, true, nullptr);
  if (report.mc_trials > 0) {
    line("ks distance, per (N, K)", ks, true, nullptr);
    line("asep, mc within binomial SE", asep_mc, false, nullptr);
    line("capacity without CSI, mc within 2%", cap_mc, false, nullptr);
    line("capacity with CSI, mc within 2%", csi_mc, false, nullptr);
    line("water-filling power, mc within SE of 1", power_mc, false, nullptr);
  } else {
    out << "  sampling checks skipped\n";
  }

  out << "\nresult: ";
  if (report.closed_form_mismatch) {
    out << "closed-form mismatch" << (opts.strict ? " (strict)" : " (reported only)") << "; ";
  }
  out << (report.check_failed ? "checks FAILED" : "checks passed") << "; exit "
      << report.exit_code() << '\n';
}

}  // namespace rislink::cli
