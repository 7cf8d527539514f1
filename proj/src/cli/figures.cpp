#include "cli/figures.hpp"

#include <stdexcept>

#include "cli/parallel.hpp"
#include "cli/sweep.hpp"

namespace rislink::cli {
namespace {

CascadedLink symmetric_link(double k, double sigma2, int n) {
  const RicianParams hop = RicianParams::from_sigma2(k, sigma2);
  return {hop, hop, n};
}

std::string modulation_note(const Modulation& mod) {
  return "modulation: p=" + format_number(mod.p) + " q=" + format_number(mod.q);
}

FigureTable asep_figure(const std::vector<double>& snr_db, const Modulation& mod, int jobs) {
  const std::vector<double> sigma2s = {0.5, 1.0, 2.0};
  FigureTable t;
  t.metadata = {
      "figure: fig2, average symbol error probability (closed form) vs average SNR",
      "link: N=5, K1=K2=1, fixed-sigma2 parameterization, Omega=(K+1)*2*sigma2",
      "assumed: sigma2 in {0.5, 1, 2}; the curve parameters are not published",
      modulation_note(mod)};
  t.columns = {"snr_db"};
  for (double s : sigma2s) t.columns.push_back("asep_sigma2_" + format_number(s));
  t.rows.assign(snr_db.size(), std::vector<double>(1 + sigma2s.size()));
  parallel_for(snr_db.size() * sigma2s.size(), jobs, [&](std::size_t cell) {
    const std::size_t i = cell / sigma2s.size();
    const std::size_t c = cell % sigma2s.size();
    const SnrModel model =
        make_snr_model(symmetric_link(1.0, sigma2s[c], 5), db_to_linear(snr_db[i]));
    t.rows[i][0] = snr_db[i];
    t.rows[i][1 + c] = asep_closed(mod, model);
  });
  t.plot = {"ASEP vs SNR, N=5, K=1", "average SNR (dB)", "ASEP", true, {}};
  for (std::size_t c = 0; c < sigma2s.size(); ++c) {
    PlotSeries s{"sigma2=" + format_number(sigma2s[c]), {}, {}};
    for (const auto& row : t.rows) {
      s.x.push_back(row[0]);
      s.y.push_back(row[1 + c]);
    }
    t.plot.series.push_back(std::move(s));
  }
  return t;
}

FigureTable capacity_figure(const std::string& name, int n, const std::vector<double>& snr_db,
                            int jobs) {
  const std::vector<double> ks = {0.0, 1.0, 5.0, 10.0};
  FigureTable t;
  t.metadata = {
      "figure: " + name + ", ergodic capacity (closed forms, bits per channel use) vs average SNR",
      "link: N=" + std::to_string(n) +
          ", K1=K2=K, sigma2=0.5 per hop, Omega=(K+1)*2*sigma2",
      "assumed: fixed-sigma2 parameterization; Omega for these curves is not published",
      "csi capacity: water-filling, G-function argument 4*gamma_bar*b^2/gamma0"};
  t.columns = {"snr_db"};
  for (double k : ks) {
    t.columns.push_back("cap_csi_k" + format_number(k));
    t.columns.push_back("cap_nocsi_k" + format_number(k));
  }
  t.rows.assign(snr_db.size(), std::vector<double>(1 + 2 * ks.size()));
  parallel_for(snr_db.size() * ks.size(), jobs, [&](std::size_t cell) {
    const std::size_t i = cell / ks.size();
    const std::size_t c = cell % ks.size();
    const SnrModel model = make_snr_model(symmetric_link(ks[c], 0.5, n), db_to_linear(snr_db[i]));
    const double gamma0 = waterfill_cutoff(model).gamma0;
    t.rows[i][0] = snr_db[i];
    t.rows[i][1 + 2 * c] = capacity_csi_closed(model, gamma0, CsiArgument::snr_scaled);
    t.rows[i][2 + 2 * c] = capacity_nocsi_closed(model);
  });
  t.plot = {"Capacity vs SNR, N=" + std::to_string(n), "average SNR (dB)",
            "capacity (bit/s/Hz)", false, {}};
  for (std::size_t c = 0; c < ks.size(); ++c) {
    for (int csi = 1; csi >= 0; --csi) {
      PlotSeries s{(csi ? "CSI K=" : "no CSI K=") + format_number(ks[c]), {}, {}};
      for (const auto& row : t.rows) {
        s.x.push_back(row[0]);
        s.y.push_back(row[(csi ? 1 : 2) + 2 * c]);
      }
      t.plot.series.push_back(std::move(s));
    }
  }
  return t;
}

}  // namespace

bool is_figure_name(const std::string& name) {
  return name == "fig2" || name == "fig3" || name == "fig4";
}

FigureTable make_figure(const std::string& name, const std::vector<double>& snr_db,
                        const Modulation& mod, int jobs) {
  if (name == "fig2") return asep_figure(snr_db, mod, jobs);
  if (name == "fig3") return capacity_figure(name, 2, snr_db, jobs);
  if (name == "fig4") return capacity_figure(name, 5, snr_db, jobs);
  throw std::invalid_argument("unknown figure '" + name + "' (expected fig2, fig3, fig4)");
}

void write_figure_csv(std::ostream& out, const FigureTable& table) {
  for (const std::string& m : table.metadata) out << "# " << m << '\n';
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << table.columns[c];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
    out << '\n';
  }
}

}  // namespace rislink::cli
