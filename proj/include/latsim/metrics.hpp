#pragma once

#include <optional>
#include <string>

#include "latsim/sim_engine.hpp"

namespace latsim {

/// Windows and bands used when summarizing a log.
struct MetricsConfig {
  double band_fraction = 0.05;       // convergence band as a fraction of |e(0)|
  double post_transient_start = 1.0; // start of steady-state windows [s]
  double decay_fit_start = 0.2;      // start of the log-norm decay fit [s]
  double decay_floor_ratio = 1e-4;   // stop the fit when ||z|| falls below this
                                     // fraction of its value at fit start
  double delta_raw_threshold = 2.7 * 3.14159265358979323846;  // excursion bookkeeping [rad]
};

/// Scalar summary of one run.
struct Metrics {
  double rms_z1 = 0.0;
  double max_abs_z1 = 0.0;
  double initial_z_norm = 0.0;
  double terminal_z_norm = 0.0;
  // Entry-and-stay convergence times of the measured-channel estimation
  // errors into band_fraction * |e(0)|; absent when never converged or the
  // initial error is zero.
  std::optional<double> conv_time_eh1;
  std::optional<double> conv_time_eh3;
  // First time each error enters its band (may leave again afterwards).
  std::optional<double> first_entry_eh1;
  std::optional<double> first_entry_eh3;
  // Least-squares slope of log ||z|| over the post-transient window, cut at
  // the numerical floor; absent when the window is degenerate.
  std::optional<double> decay_rate;
  double sat_duty = 0.0;             // fraction of samples with saturated steering
  double last_sat_time = -1.0;       // last sample with saturated steering [s]
  double first_delta_raw_exceed = -1.0;  // |delta_raw| > threshold bookkeeping [s]
  double last_delta_raw_exceed = -1.0;
  double max_e2_post = 0.0;          // max |z2 - z2_hat| after post_transient_start
  double max_ed_lat_post = 0.0;      // max |d_lat - d_lat_hat| after post_transient_start
  double peak_abs_z2_hat = 0.0;      // peaking amplitude bookkeeping [m/s]
  double duration = 0.0;             // time of the last sample [s]
};

/// Summary statistics over the stored samples of a run.
Metrics compute_metrics(const SimLog& log, const MetricsConfig& cfg = {});

/// Metrics serialized as a JSON object (optionals become null).
std::string metrics_to_json(const Metrics& m, const std::string& scenario_name,
                            const std::optional<AbortInfo>& abort);

}  // namespace latsim
