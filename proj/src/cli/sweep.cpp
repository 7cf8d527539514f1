#include "cli/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cli/parallel.hpp"
#include "rislink/errors.hpp"
#include "rislink/monte_carlo.hpp"

namespace rislink::cli {

const char* const kSweepHeader =
    "snr_db,asep_closed,asep_quad,cap_nocsi_closed,cap_nocsi_quad,gamma0,"
    "cap_csi_closed,cap_csi_quad,mc_asep,mc_cap_nocsi,mc_cap_csi";

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

std::vector<double> snr_grid_db(double start, double stop, double step) {
  if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step)) {
    throw DomainError("SNR grid bounds must be finite");
  }
  if (!(step > 0.0)) throw DomainError("SNR step must be positive");
  if (stop < start) throw DomainError("SNR grid needs start <= stop");
  const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  if (count > 100000) throw DomainError("SNR grid has too many points");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) grid.push_back(start + static_cast<double>(i) * step);
  return grid;
}

SweepRow evaluate_point(const CascadedLink& link, const Modulation& mod, double snr_db) {
  try {
    const SnrModel model = make_snr_model(link, db_to_linear(snr_db));
    SweepRow row;
    row.snr_db = snr_db;
    row.asep_closed = asep_closed(mod, model);
    row.asep_quad = asep_quadrature(mod, model);
    row.cap_nocsi_closed = capacity_nocsi_closed(model);
    row.cap_nocsi_quad = capacity_nocsi_quadrature(model);
    row.gamma0 = waterfill_cutoff(model).gamma0;
    row.cap_csi_closed = capacity_csi_closed(model, row.gamma0, CsiArgument::snr_scaled);
    row.cap_csi_quad = capacity_csi_quadrature(model, row.gamma0);
    return row;
  } catch (const std::exception& e) {
    throw GridPointError("at " + format_number(snr_db) + " dB: " + e.what());
  }
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int jobs, const McOptions& mc) {
  const std::vector<double> grid =
      snr_grid_db(spec.snr_db_start, spec.snr_db_stop, spec.snr_db_step);
  std::vector<SweepRow> rows(grid.size());
  parallel_for(grid.size(), jobs, [&](std::size_t i) {
    rows[i] = evaluate_point(spec.link, spec.modulation, grid[i]);
  });
  if (mc.trials > 0) {
    SimConfig config;
    config.link = spec.link;
    config.trials = mc.trials;
    config.seed = mc.seed;
    config.workers = std::max(jobs, 1);
    config.modulation = spec.modulation;
    config.compute_ks = false;
    std::vector<double> gamma_bars;
    std::vector<std::optional<double>> cutoffs;
    for (const SweepRow& r : rows) {
      gamma_bars.push_back(db_to_linear(r.snr_db));
      cutoffs.emplace_back(r.gamma0);
    }
    const std::vector<SimSummary> sims = simulate_sweep(config, gamma_bars, cutoffs);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      rows[i].mc_asep = sims[i].asep.mean;
      rows[i].mc_cap_nocsi = sims[i].capacity_nocsi.mean;
      rows[i].mc_cap_csi = sims[i].capacity_csi->mean;
    }
  }
  return rows;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepHeader << '\n';
  const auto opt = [](const std::optional<double>& v) {
    return v ? format_number(*v) : std::string();
  };
  for (const SweepRow& r : rows) {
    out << format_number(r.snr_db) << ',' << format_number(r.asep_closed) << ','
        << format_number(r.asep_quad) << ',' << format_number(r.cap_nocsi_closed) << ','
        << format_number(r.cap_nocsi_quad) << ',' << format_number(r.gamma0) << ','
        << format_number(r.cap_csi_closed) << ',' << format_number(r.cap_csi_quad) << ','
        << opt(r.mc_asep) << ',' << opt(r.mc_cap_nocsi) << ',' << opt(r.mc_cap_csi) << '\n';
  }
}

}  // namespace rislink::cli
