#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rislink/channel_model.hpp"
#include "rislink/performance.hpp"

namespace rislink::cli {

enum class Parameterization { fix_omega, fix_sigma2 };

struct SweepSpec {
  double snr_db_start = 0.0;
  double snr_db_stop = 20.0;
  double snr_db_step = 1.0;
  CascadedLink link;
  Parameterization parameterization = Parameterization::fix_sigma2;
  Modulation modulation = Modulation::bpsk();
};

struct McOptions {
  long long trials = 0;
  std::uint64_t seed = 1;
};

struct SweepRow {
  double snr_db = 0.0;
  double asep_closed = 0.0;
  double asep_quad = 0.0;
  double cap_nocsi_closed = 0.0;
  double cap_nocsi_quad = 0.0;
  double gamma0 = 0.0;
  double cap_csi_closed = 0.0;
  double cap_csi_quad = 0.0;
  std::optional<double> mc_asep;
  std::optional<double> mc_cap_nocsi;
  std::optional<double> mc_cap_csi;
};

// Raised for a failure at one grid point; the message names the point.
class GridPointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double db_to_linear(double db);
double linear_to_db(double linear);

// start, start + step, ... up to stop (inclusive, with a small tolerance for
// accumulated rounding). Points are computed as start + i * step.
std::vector<double> snr_grid_db(double start, double stop, double step);

// All analytic columns at one average SNR. The CSI closed form uses the
// SNR-scaled argument, the one that agrees with the integral.
SweepRow evaluate_point(const CascadedLink& link, const Modulation& mod, double snr_db);

// Rows in grid order. Grid points run on up to `jobs` threads; the Monte
// Carlo columns (when mc.trials > 0) come from one shared set of draws.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, int jobs,
                                const McOptions& mc = {});

// %.12g, the fixed numeric format of every CSV this tool writes.
std::string format_number(double v);

extern const char* const kSweepHeader;
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace rislink::cli
