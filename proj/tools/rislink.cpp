// rislink: performance of an RIS-assisted link over cascaded Rician fading.
//
//   rislink params   [link flags]
//   rislink sweep    [link flags] [snr flags] [modulation flags] [--mc-trials T --seed S]
//   rislink figure   {fig2|fig3|fig4} [snr flags] [--out PATH] [--plot PATH]
//   rislink validate [--grid-n L] [--grid-k L] [--grid-snr-db L] [--strict] [--skip-mc]
//
// Exit codes: 0 success, 1 usage, 2 numerical failure or failed check,
// 3 closed-form mismatch under --strict.

#include <unistd.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>

#include "cli/figures.hpp"
#include "cli/sweep.hpp"
#include "cli/validate.hpp"
#include "rislink/channel_model.hpp"

namespace {

using namespace rislink;
using namespace rislink::cli;

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LinkFlags {
  double k1 = 1.0;
  double k2 = 1.0;
  std::optional<double> omega1;
  std::optional<double> omega2;
  std::optional<double> sigma2;
  int n = 5;

  void add_to(CLI::App* app) {
    app->add_option("--k1", k1, "Rician K of the AP-RIS hop")->check(CLI::NonNegativeNumber)->capture_default_str();
    app->add_option("--k2", k2, "Rician K of the RIS-user hop")->check(CLI::NonNegativeNumber)->capture_default_str();
    app->add_option("--omega1", omega1, "mean-square envelope of hop 1 (fixes Omega)")->check(CLI::PositiveNumber);
    app->add_option("--omega2", omega2, "mean-square envelope of hop 2 (fixes Omega)")->check(CLI::PositiveNumber);
    app->add_option("--sigma2", sigma2, "scattered power per dimension on both hops (default 0.5)")->check(CLI::PositiveNumber);
    app->add_option("--n", n, "number of RIS elements")->check(CLI::PositiveNumber)->capture_default_str();
  }

  // Omega flags select the fixed-Omega parameterization (an unset Omega is
  // 1); otherwise Omega = (K + 1) * 2 * sigma2.
  CascadedLink resolve() const {
    if (!std::isfinite(k1) || !std::isfinite(k2)) throw UsageError("--k1/--k2 must be finite");
    if ((omega1 || omega2) && sigma2) {
      throw UsageError("--omega1/--omega2 and --sigma2 select different parameterizations; pass one");
    }
    CascadedLink link;
    link.n_elements = n;
    if (omega1 || omega2) {
      link.hop1 = {k1, omega1.value_or(1.0)};
      link.hop2 = {k2, omega2.value_or(1.0)};
      if (!std::isfinite(link.hop1.omega) || !std::isfinite(link.hop2.omega)) {
        throw UsageError("--omega1/--omega2 must be finite");
      }
    } else {
      const double s2 = sigma2.value_or(0.5);
      if (!std::isfinite(s2)) throw UsageError("--sigma2 must be finite");
      link.hop1 = RicianParams::from_sigma2(k1, s2);
      link.hop2 = RicianParams::from_sigma2(k2, s2);
    }
    return link;
  }
};

struct ModulationFlags {
  std::string name = "bpsk";
  std::optional<double> p;
  std::optional<double> q;

  void add_to(CLI::App* app) {
    app->add_option("--modulation", name, "conditional error kernel p*Q(sqrt(2 q gamma))")
        ->check(CLI::IsMember({"bpsk", "qpsk", "custom"}))
        ->capture_default_str();
    app->add_option("--p", p, "kernel scale p (custom modulation)");
    app->add_option("--q", q, "kernel SNR scale q (custom modulation)");
  }

  Modulation resolve() const {
    if (name != "custom") {
      if (p || q) throw UsageError("--p/--q require --modulation custom");
      return name == "qpsk" ? Modulation::qpsk() : Modulation::bpsk();
    }
    if (!p || !q) throw UsageError("--modulation custom requires --p and --q");
    if (!(*p > 0.0 && *p <= 2.0)) throw UsageError("--p must lie in (0, 2]");
    if (!(*q > 0.0) || !std::isfinite(*q)) throw UsageError("--q must be positive");
    return {*p, *q};
  }
};

struct SnrFlags {
  double start = 0.0;
  double stop = 20.0;
  double step = 1.0;

  void add_to(CLI::App* app) {
    app->add_option("--snr-db-start", start, "first average SNR (dB)")->capture_default_str();
    app->add_option("--snr-db-stop", stop, "last average SNR (dB)")->capture_default_str();
    app->add_option("--snr-db-step", step, "SNR step (dB)")->capture_default_str();
  }

  std::vector<double> grid() const {
    try {
      return snr_grid_db(start, stop, step);
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
  }
};

int default_jobs() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

bool use_color() {
  const char* no_color = std::getenv("NO_COLOR");
  if (no_color != nullptr && no_color[0] != '\0') return false;
  return isatty(fileno(stdout)) != 0;
}

// Opens the output target up front so an unwritable path fails before any
// computation.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_.open(path, std::ios::out | std::ios::trunc);
    if (!file_) throw UsageError("cannot open '" + path + "' for writing");
    path_ = path;
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void finish() {
    stream().flush();
    if (!stream()) throw std::runtime_error("write failed for '" + path_ + "'");
  }

 private:
  std::ofstream file_;
  std::string path_;
};

void print_params(const CascadedLink& link) {
  const double mean = mean_cascaded_element(link.hop1, link.hop2);
  const double var = var_cascaded_element(link.hop1, link.hop2);
  const GammaApprox g = laguerre_params(link);
  std::printf("K1            %.12g\nOmega1        %.12g\nK2            %.12g\nOmega2        %.12g\n",
              link.hop1.k, link.hop1.omega, link.hop2.k, link.hop2.omega);
  std::printf("N             %d\n", link.n_elements);
  std::printf("E[xi_l]       %.12g\nVar[xi_l]     %.12g\n", mean, var);
  std::printf("E[xi]         %.12g\nVar[xi]       %.12g\n", link.n_elements * mean,
              link.n_elements * var);
  std::printf("a             %.12g\nb             %.12g\na+1           %.12g\n", g.a, g.b,
              g.shape());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Performance of an RIS-assisted link over cascaded Rician fading"};
  app.require_subcommand(1);

  LinkFlags link_flags;
  SnrFlags snr_flags;
  ModulationFlags mod_flags;
  int jobs = default_jobs();
  std::optional<long long> mc_trials;
  std::uint64_t seed = 1;
  std::string out_path;
  std::string plot_path;

  CLI::App* params = app.add_subcommand("params", "print cascaded moments and the Gamma parameters a, b");
  link_flags.add_to(params);

  CLI::App* sweep = app.add_subcommand("sweep", "CSV of all metrics over an SNR grid");
  link_flags.add_to(sweep);
  snr_flags.add_to(sweep);
  mod_flags.add_to(sweep);
  sweep->add_option("--mc-trials", mc_trials, "add Monte Carlo columns with this many trials")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--seed", seed, "Monte Carlo seed")->capture_default_str();
  sweep->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--out", out_path, "output CSV path (default stdout)");

  std::string figure_name;
  CLI::App* figure = app.add_subcommand("figure", "reproduce a figure as CSV (and optional SVG)");
  figure->add_option("name", figure_name, "fig2 | fig3 | fig4")
      ->required()
      ->check(CLI::IsMember({"fig2", "fig3", "fig4"}));
  snr_flags.add_to(figure);
  mod_flags.add_to(figure);
  figure->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  figure->add_option("--out", out_path, "output CSV path (default stdout)");
  figure->add_option("--plot", plot_path, "also write an SVG line plot");

  ValidateOptions vopts;
  std::optional<double> validate_sigma2;
  CLI::App* validate =
      app.add_subcommand("validate", "closed forms vs quadrature vs Monte Carlo over a grid");
  validate->add_option("--grid-n", vopts.grid_n, "element counts")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  validate->add_option("--grid-k", vopts.grid_k, "Rician K values (both hops)")
      ->delimiter(',')
      ->check(CLI::NonNegativeNumber);
  validate->add_option("--grid-snr-db", vopts.grid_snr_db, "average SNRs (dB)")->delimiter(',');
  validate->add_option("--sigma2", validate_sigma2, "scattered power per dimension (default 0.5)")
      ->check(CLI::PositiveNumber);
  mod_flags.add_to(validate);
  validate->add_option("--mc-trials", mc_trials, "Monte Carlo trials per (N, K) (default 1000000)")
      ->check(CLI::PositiveNumber);
  validate->add_option("--seed", seed, "Monte Carlo seed")->capture_default_str();
  validate->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  validate->add_flag("--skip-mc", vopts.skip_mc, "closed forms and quadrature only");
  validate->add_flag("--strict", vopts.strict, "exit 3 when a closed form disagrees with quadrature");
  validate->add_option("--perturb-meijer", vopts.perturb_meijer)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (params->parsed()) {
      print_params(link_flags.resolve());
      return 0;
    }
    if (sweep->parsed()) {
      SweepSpec spec;
      spec.link = link_flags.resolve();
      spec.parameterization = (link_flags.omega1 || link_flags.omega2)
                                  ? Parameterization::fix_omega
                                  : Parameterization::fix_sigma2;
      spec.modulation = mod_flags.resolve();
      snr_flags.grid();
      spec.snr_db_start = snr_flags.start;
      spec.snr_db_stop = snr_flags.stop;
      spec.snr_db_step = snr_flags.step;
      Output out(out_path);
      McOptions mc;
      mc.trials = mc_trials.value_or(0);
      mc.seed = seed;
      const auto rows = run_sweep(spec, jobs, mc);
      write_sweep_csv(out.stream(), rows);
      out.finish();
      return 0;
    }
    if (figure->parsed()) {
      const std::vector<double> grid = snr_flags.grid();
      const Modulation mod = mod_flags.resolve();
      Output out(out_path);
      std::optional<Output> plot;
      if (!plot_path.empty()) plot.emplace(plot_path);
      const FigureTable table = make_figure(figure_name, grid, mod, jobs);
      write_figure_csv(out.stream(), table);
      out.finish();
      if (plot) {
        plot->stream() << render_svg(table.plot);
        plot->finish();
      }
      return 0;
    }
    if (validate->parsed()) {
      if (vopts.grid_n.empty() || vopts.grid_k.empty() || vopts.grid_snr_db.empty()) {
        throw UsageError("validation grid lists must not be empty");
      }
      for (double db : vopts.grid_snr_db) {
        if (!std::isfinite(db)) throw UsageError("--grid-snr-db values must be finite");
      }
      for (double k : vopts.grid_k) {
        if (!std::isfinite(k)) throw UsageError("--grid-k values must be finite");
      }
      vopts.sigma2 = validate_sigma2.value_or(0.5);
      vopts.modulation = mod_flags.resolve();
      if (mc_trials) vopts.mc_trials = *mc_trials;
      vopts.seed = seed;
      vopts.jobs = jobs;
      const ValidateReport report = run_validation(vopts);
      print_report(std::cout, report, vopts, use_color());
      return report.exit_code();
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}
