// Acceptance run: one PASS/FAIL line per criterion with the measured value,
// the pinned limit and the runtime. Exit status is nonzero if any line fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <regex>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "cli/sweep.hpp"
#include "rislink/channel_model.hpp"
#include "rislink/meijer_g.hpp"
#include "rislink/monte_carlo.hpp"
#include "rislink/performance.hpp"
#include "rislink/special_functions.hpp"

using namespace rislink;

namespace {

const std::vector<int> kGridN = {1, 2, 5};
const std::vector<double> kGridK = {0.0, 1.0, 5.0, 10.0};
const std::vector<double> kGridDb = {0.0, 5.0, 10.0, 15.0, 20.0};
constexpr double kSigma2 = 0.5;
constexpr long long kKsTrials = 1'000'000;
constexpr long long kMcTrials = 10'000'000;
constexpr std::uint64_t kSeed = 20240607;

int g_failures = 0;

void report(const std::string& id, bool ok, const std::string& text) {
  if (!ok) ++g_failures;
  std::printf("[%s] %-3s %s\n", ok ? "PASS" : "FAIL", id.c_str(), text.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel(double v, double ref) { return std::abs(v - ref) / std::abs(ref); }

CascadedLink link_of(int n, double k) {
  const RicianParams hop = RicianParams::from_sigma2(k, kSigma2);
  return {hop, hop, n};
}

int workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(RISLINK_BIN) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// Analytic values at one grid cell.
struct Cell {
  int n;
  double k;
  double db;
  double asep_closed, asep_quad;
  double nocsi_closed, nocsi_quad;
  double gamma0, residual;
  double csi_quad;
  std::optional<SimSummary> mc;
};

void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  using special::MeijerGSpec;
  using special::meijer_g;
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double x = 1e-3 + 50.0 * u(gen);
    worst = std::max(worst, rel(meijer_g(MeijerGSpec{1, 0, {}, {0.0}, x}).value, std::exp(-x)));
  }
  for (int i = 0; i < 200; ++i) {
    const double v = 0.1 + 19.9 * u(gen);
    const double x = 0.01 + 40.0 * u(gen);
    const double ref = special::reg_lower_gamma(v, x) * std::exp(special::ln_gamma(v));
    worst = std::max(worst, rel(meijer_g(MeijerGSpec{1, 1, {1.0}, {v, 0.0}, x}).value, ref));
  }
  for (int i = 0; i < 200; ++i) {
    const double x = std::pow(10.0, -4.0 + 8.0 * u(gen));
    worst = std::max(worst, rel(meijer_g(MeijerGSpec{1, 2, {1.0, 1.0}, {1.0, 0.0}, x}).value,
                                std::log1p(x)));
  }
  double worst_zero = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double x = std::pow(10.0, -3.0 + 6.0 * u(gen));
    const double g = meijer_g(MeijerGSpec{0, 2, {1.0, 1.0}, {0.0, 0.0}, x}).value;
    if (x > 1.0) {
      worst = std::max(worst, rel(g, std::log(x)));
    } else {
      worst_zero = std::max(worst_zero, std::abs(g));
    }
  }
  double worst_w = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double x = 0.01 + 50.0 * u(gen);
    const double w = special::bessel_i_scaled(0, x) * special::bessel_k(1.0, x) +
                     special::bessel_i_scaled(1, x) * special::bessel_k(0.0, x);
    worst_w = std::max(worst_w, std::abs(w * std::exp(x) * x - 1.0));
  }
  const double t = seconds_since(t0);
  report("1", worst < 1e-8 && worst_zero < 1e-8 && worst_w < 1e-9 && t < 30.0,
         fmt("special-function identities: G-function worst rel %.2e (limit 1e-8), "
             "below-one step-log worst |G| %.2e, Bessel Wronskian worst %.2e (limit 1e-9), %.1f s (limit 30 s)",
             worst, worst_zero, worst_w, t));
}

void criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string worst_text;
  double worst_margin = -1.0;
  std::map<int, double> ks_k1;
  for (int n : kGridN) {
    for (double k : kGridK) {
      SimConfig c;
      c.link = link_of(n, k);
      c.trials = kKsTrials;
      c.seed = kSeed;
      c.workers = workers();
      c.compute_ks = true;
      const double ks = simulate(c).ks_distance_vs_model;
      const double limit = n >= 2 ? 0.02 : 0.05;
      if (!(ks < limit)) ok = false;
      if (ks / limit > worst_margin) {
        worst_margin = ks / limit;
        worst_text = fmt("N=%d K=%g KS %.4f (limit %.2f)", n, k, ks, limit);
      }
      if (k == 1.0) ks_k1[n] = ks;
    }
  }
  const bool decreasing = ks_k1[1] > ks_k1[2] && ks_k1[2] > ks_k1[5];
  const double t = seconds_since(t0);
  report("2", ok && decreasing && t < 120.0,
         fmt("SNR model fit, 1e6 samples per link: worst %s; K=1 KS N=1,2,5 = %.4f, %.4f, %.4f "
             "(must decrease); %.1f s (limit 120 s)",
             worst_text.c_str(), ks_k1[1], ks_k1[2], ks_k1[5], t));
}

std::vector<Cell> analytic_grid() {
  std::vector<Cell> cells;
  for (int n : kGridN) {
    for (double k : kGridK) {
      for (double db : kGridDb) {
        const SnrModel m = make_snr_model(link_of(n, k), cli::db_to_linear(db));
        Cell c{n, k, db, 0, 0, 0, 0, 0, 0, 0, std::nullopt};
        c.asep_closed = asep_closed(Modulation::bpsk(), m);
        c.asep_quad = asep_quadrature(Modulation::bpsk(), m);
        c.nocsi_closed = capacity_nocsi_closed(m);
        c.nocsi_quad = capacity_nocsi_quadrature(m);
        const WaterFillSolution wf = waterfill_cutoff(m);
        c.gamma0 = wf.gamma0;
        c.residual = waterfill_residual(m, wf.gamma0);
        c.csi_quad = capacity_csi_quadrature(m, wf.gamma0);
        cells.push_back(c);
      }
    }
  }
  return cells;
}

double run_grid_mc(std::vector<Cell>& cells) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t per_link = kGridDb.size();
  for (std::size_t first = 0; first < cells.size(); first += per_link) {
    SimConfig c;
    c.link = link_of(cells[first].n, cells[first].k);
    c.trials = kMcTrials;
    c.seed = kSeed;
    c.workers = workers();
    c.compute_ks = false;
    std::vector<double> bars;
    std::vector<std::optional<double>> cutoffs;
    for (std::size_t j = 0; j < per_link; ++j) {
      bars.push_back(cli::db_to_linear(cells[first + j].db));
      cutoffs.emplace_back(cells[first + j].gamma0);
    }
    const auto sims = simulate_sweep(c, bars, cutoffs);
    for (std::size_t j = 0; j < per_link; ++j) cells[first + j].mc = sims[j];
  }
  return seconds_since(t0);
}

void criterion_3(const std::vector<Cell>& cells, double analytic_s, double mc_s) {
  int compared = 0, agree = 0;
  double worst = 0.0;
  for (const Cell& c : cells) {
    if (c.asep_quad <= 1e-12) continue;
    ++compared;
    const double e = rel(c.asep_closed, c.asep_quad);
    worst = std::max(worst, e);
    if (e <= 1e-5) ++agree;
  }
  report("3a", agree == compared,
         fmt("ASEP closed form vs quadrature: %d/%d cells within 1e-5 (ASEP > 1e-12), worst rel %.2e",
             agree, compared, worst));

  int mc_compared = 0, mc_agree = 0;
  double worst_z = 0.0;
  std::string worst_cell;
  for (const Cell& c : cells) {
    if (c.asep_quad <= 1e-5) continue;
    ++mc_compared;
    const double se = std::sqrt(c.asep_quad * (1.0 - c.asep_quad) / static_cast<double>(kMcTrials));
    const double z = std::abs(c.mc->asep.mean - c.asep_quad) / se;
    if (z <= 3.0) ++mc_agree;
    if (z > worst_z) {
      worst_z = z;
      worst_cell = fmt("N=%d K=%g %g dB: quadrature %.4e, MC %.4e", c.n, c.k, c.db, c.asep_quad,
                       c.mc->asep.mean);
    }
  }
  const double t = analytic_s + mc_s;
  report("3b", mc_agree == mc_compared && t < 300.0,
         fmt("ASEP quadrature vs Monte Carlo (1e7 trials, BPSK): %d/%d cells within 3 binomial SE "
             "(ASEP > 1e-5), worst %.1f SE at %s; %.1f s (limit 300 s)",
             mc_agree, mc_compared, worst_z, worst_cell.c_str(), t));
}

void criterion_4(const std::vector<Cell>& cells) {
  int agree = 0;
  double worst = 0.0;
  for (const Cell& c : cells) {
    const double e = rel(c.nocsi_closed, c.nocsi_quad);
    worst = std::max(worst, e);
    if (e <= 1e-5) ++agree;
  }
  report("4a", agree == static_cast<int>(cells.size()),
         fmt("capacity without CSI, closed form vs quadrature: %d/%zu cells within 1e-5, worst rel %.2e",
             agree, cells.size(), worst));
  int mc_agree = 0;
  double worst_mc = 0.0;
  for (const Cell& c : cells) {
    const double e = rel(c.mc->capacity_nocsi.mean, c.nocsi_quad);
    worst_mc = std::max(worst_mc, e);
    if (e <= 0.02) ++mc_agree;
  }
  report("4b", mc_agree == static_cast<int>(cells.size()),
         fmt("capacity without CSI, quadrature vs Monte Carlo (1e7 trials): %d/%zu cells within 2%%, "
             "worst rel %.2e",
             mc_agree, cells.size(), worst_mc));
}

void criterion_5(const std::vector<Cell>& cells) {
  int res_ok = 0, range_ok = 0, power_ok = 0;
  double worst_res = 0.0, worst_z = 0.0;
  double g_min = 1e300, g_max = 0.0;
  std::string worst_cell;
  for (const Cell& c : cells) {
    worst_res = std::max(worst_res, std::abs(c.residual));
    if (std::abs(c.residual) < 1e-9) ++res_ok;
    if (c.gamma0 > 0.0 && c.gamma0 <= 1.0) ++range_ok;
    g_min = std::min(g_min, c.gamma0);
    g_max = std::max(g_max, c.gamma0);
    const Estimate& p = *c.mc->power;
    const double z = std::abs(p.mean - 1.0) / p.std_error;
    if (z <= 4.0) ++power_ok;
    if (z > worst_z) {
      worst_z = z;
      worst_cell = fmt("N=%d K=%g %g dB: mean power %.6f +- %.1e", c.n, c.k, c.db, p.mean, p.std_error);
    }
  }
  const int total = static_cast<int>(cells.size());
  report("5a", res_ok == total,
         fmt("water-filling constraint residual: %d/%d cells below 1e-9, worst %.2e", res_ok, total,
             worst_res));
  report("5b", range_ok == total,
         fmt("water-filling cutoff in (0, 1]: %d/%d cells, range [%.4f, %.6f]", range_ok, total,
             g_min, g_max));
  report("5c", power_ok == total,
         fmt("Monte Carlo power expenditure within 4 SE of 1 (1e7 trials): %d/%d cells, worst %.1f SE at %s",
             power_ok, total, worst_z, worst_cell.c_str()));
}

void criterion_6(const std::vector<Cell>& cells) {
  std::map<std::tuple<int, double, double>, double> gap;
  bool ordered = true;
  double min_gap = 1e300;
  for (const Cell& c : cells) {
    const double g = c.csi_quad - c.nocsi_quad;
    gap[{c.n, c.k, c.db}] = g;
    min_gap = std::min(min_gap, g);
    if (g < 0.0) ordered = false;
  }
  constexpr double kSlack = 1e-12;
  int k_viol = 0, n_viol = 0;
  for (int n : kGridN) {
    for (double db : kGridDb) {
      for (std::size_t i = 1; i < kGridK.size(); ++i) {
        if (gap[{n, kGridK[i], db}] > gap[{n, kGridK[i - 1], db}] + kSlack) ++k_viol;
      }
    }
  }
  for (double k : kGridK) {
    for (double db : kGridDb) {
      for (std::size_t i = 1; i < kGridN.size(); ++i) {
        if (gap[{kGridN[i], k, db}] > gap[{kGridN[i - 1], k, db}] + kSlack) ++n_viol;
      }
    }
  }
  double worst_high = 0.0;
  for (double db : kGridDb) {
    if (db >= 10.0) worst_high = std::max(worst_high, gap[{5, 10.0, db}]);
  }
  report("6", ordered && k_viol == 0 && n_viol == 0 && worst_high < 0.05,
         fmt("capacity ordering: min(CSI - no CSI) %.3e (>= 0), gap increases in K at %d and in N at "
             "%d places (must be 0), K=10 N=5 >= 10 dB largest gap %.2e bit (limit 0.05)",
             min_gap, k_viol, n_viol, worst_high));
}

void criterion_7() {
  int violations = 0;
  int points = 0;
  for (double db = 0.0; db <= 30.0; db += 1.0) {
    double prev = 1.0;
    for (double s2 : {0.5, 1.0, 2.0}) {
      const RicianParams hop = RicianParams::from_sigma2(1.0, s2);
      const SnrModel m = make_snr_model({hop, hop, 5}, cli::db_to_linear(db));
      const double a = asep_closed(Modulation::bpsk(), m);
      if (!(a < prev)) ++violations;
      prev = a;
    }
    ++points;
  }
  report("7", violations == 0,
         fmt("ASEP strictly decreasing in sigma2 in {0.5, 1, 2} (N=5, K=1): %d violations over %d "
             "SNR points 0..30 dB",
             violations, points));
}

void criterion_8() {
  const std::string args =
      "sweep --snr-db-start 0 --snr-db-stop 20 --snr-db-step 2 --mc-trials 100000 --seed 7 --jobs 2";
  const RunResult a = run_cli(args);
  const RunResult b = run_cli(args);
  const bool ok = a.exit_code == 0 && b.exit_code == 0 && !a.out.empty() && a.out == b.out;
  report("8", ok,
         fmt("sweep with fixed seed and jobs: exit codes %d/%d, %zu vs %zu bytes, %s", a.exit_code,
             b.exit_code, a.out.size(), b.out.size(), a.out == b.out ? "byte-identical" : "differ"));
}

void criterion_9() {
  const RunResult r = run_cli("validate --skip-mc");
  int rows = 0;
  std::size_t pos = 0;
  while ((pos = r.out.find('\n', pos)) != std::string::npos) {
    ++pos;
    // Cell rows start with the element count right-aligned in three columns.
    if (pos + 3 < r.out.size() && r.out[pos] == ' ' && r.out[pos + 1] == ' ' &&
        std::isdigit(static_cast<unsigned char>(r.out[pos + 2]))) {
      ++rows;
    }
  }
  const bool has_columns = r.out.find("csi-pub") != std::string::npos &&
                           r.out.find("csi-snr") != std::string::npos;
  const bool literal_documented = r.out.find("published argument diverges") != std::string::npos;
  const bool scaled_tracks =
      std::regex_search(r.out, std::regex(R"(capacity with CSI, snr-scaled argument\s+60/60)"));
  const bool nocsi_tracks = std::regex_search(r.out, std::regex(R"(capacity without CSI\s+60/60)"));
  const RunResult strict = run_cli("validate --skip-mc --strict --perturb-meijer 1e-3");
  report("9", r.exit_code == 0 && rows == 60 && has_columns && literal_documented && scaled_tracks &&
                  nocsi_tracks && strict.exit_code == 3,
         fmt("validate report: %d cell rows (need 60), literal and corrected CSI columns %s, "
             "published-argument divergence %s, corrected candidate tracks %s, no-CSI closed form "
             "tracks %s, perturbed closed form under --strict exits %d (need 3)",
             rows, has_columns ? "present" : "missing",
             literal_documented ? "documented" : "not documented", scaled_tracks ? "60/60" : "no",
             nocsi_tracks ? "60/60" : "no", strict.exit_code));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion_1();
  criterion_2();
  const auto ta = std::chrono::steady_clock::now();
  std::vector<Cell> cells = analytic_grid();
  const double analytic_s = seconds_since(ta);
  const double mc_s = run_grid_mc(cells);
  criterion_3(cells, analytic_s, mc_s);
  criterion_4(cells);
  criterion_5(cells);
  criterion_6(cells);
  criterion_7();
  criterion_8();
  criterion_9();
  std::printf("%d failing line(s), total %.1f s\n", g_failures, seconds_since(t0));
  return g_failures == 0 ? 0 : 1;
}
