#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "rislink/monte_carlo.hpp"
#include "rislink/performance.hpp"

namespace rislink::cli {

struct ValidateOptions {
  std::vector<int> grid_n = {1, 2, 5};
  std::vector<double> grid_k = {0.0, 1.0, 5.0, 10.0};
  std::vector<double> grid_snr_db = {0.0, 5.0, 10.0, 15.0, 20.0};
  double sigma2 = 0.5;
  Modulation modulation = Modulation::bpsk();
  long long mc_trials = 1000000;
  std::uint64_t seed = 1;
  int jobs = 1;
  bool skip_mc = false;
  bool strict = false;
  // Fault injection: added to the first lower parameter of every closed-form
  // G-function kernel.
  double perturb_meijer = 0.0;
};

// Agreement thresholds.
inline constexpr double kClosedFormRelTol = 1e-5;
inline constexpr double kResidualTol = 1e-9;
inline constexpr double kAsepFloor = 1e-12;     // closed-vs-quadrature compared above this
inline constexpr double kAsepMcFloor = 1e-5;    // MC compared above this
inline constexpr double kAsepMcSigmas = 3.0;
inline constexpr double kCapacityMcRel = 0.02;
inline constexpr double kPowerMcSigmas = 4.0;

struct McCell {
  Estimate asep;
  Estimate capacity_nocsi;
  Estimate capacity_csi;
  Estimate power;
  double ks = 0.0;
};

struct CellReport {
  int n = 1;
  double k = 0.0;
  double snr_db = 0.0;
  double asep_closed = 0.0;
  double asep_quad = 0.0;
  double cap_nocsi_closed = 0.0;
  double cap_nocsi_quad = 0.0;
  double gamma0 = 0.0;
  double residual = 0.0;
  double csi_literal = 0.0;
  double csi_scaled = 0.0;
  double csi_quad = 0.0;
  std::optional<McCell> mc;

  bool asep_match() const;
  bool nocsi_match() const;
  bool csi_literal_match() const;
  bool csi_scaled_match() const;
  bool cutoff_ok() const;
  // Each returns nullopt when the check does not apply.
  std::optional<bool> ks_ok() const;
  std::optional<bool> asep_mc_ok(long long trials) const;
  std::optional<bool> capacity_mc_ok() const;
  std::optional<bool> capacity_csi_mc_ok() const;
  std::optional<bool> power_mc_ok() const;
};

struct ValidateReport {
  std::vector<CellReport> cells;
  long long mc_trials = 0;
  bool strict = false;
  bool closed_form_mismatch = false;  // some quantity has no agreeing candidate
  bool check_failed = false;          // cutoff or sampling check failed
  // 3 for a closed-form mismatch under strict, 2 for a failed check, else 0.
  int exit_code() const;
};

double relative_error(double value, double reference);

ValidateReport run_validation(const ValidateOptions& opts);
void print_report(std::ostream& out, const ValidateReport& report,
                  const ValidateOptions& opts, bool color);

}  // namespace rislink::cli
