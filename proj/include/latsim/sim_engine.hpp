#pragma once

#include <optional>
#include <string>
#include <vector>

#include "latsim/scenario.hpp"

namespace latsim {

/// One logged sample. Truth, measurements, estimates and the control trace
/// are all taken at the same instant; the steering columns hold the command
/// applied over the step that starts here.
struct LogRow {
  double t = 0.0;
  // plant
  double y_dot = 0.0, psi = 0.0, psi_dot = 0.0, x = 0.0, y = 0.0;
  // reference
  double x_des = 0.0, y_des = 0.0, psi_des = 0.0, psi_dot_des = 0.0, psi_ddot_des = 0.0;
  double kappa = 0.0, ay_des = 0.0, phi = 0.0;
  // true error coordinates and disturbances
  double z1 = 0.0, z2 = 0.0, z3 = 0.0, z4 = 0.0, d_lat = 0.0, d_yaw = 0.0;
  // measurements
  double z1_meas = 0.0, z3_meas = 0.0;
  // observer estimates
  double z1_hat = 0.0, z2_hat = 0.0, d_lat_hat = 0.0;
  double z3_hat = 0.0, z4_hat = 0.0, d_yaw_hat = 0.0;
  // estimation errors on the measured channels
  double e_h1 = 0.0, e_h3 = 0.0;
  // control trace
  double nu_h = 0.0, z3_des_cmd = 0.0, u_d = 0.0, u = 0.0;
  double delta_raw = 0.0, delta = 0.0;
  bool saturated = false;
};

/// Time-ordered samples of a run. The final integration step is always
/// stored regardless of stride.
struct SimLog {
  double dt = 0.0;
  int stride = 1;
  std::vector<LogRow> rows;
};

/// A run that left the model's validity domain. Aborts are results, not
/// exceptions: the log up to the abort time stays valid.
struct AbortInfo {
  double t = 0.0;
  std::string reason;
};

struct SimResult {
  SimLog log;
  std::optional<AbortInfo> abort;
  double wall_seconds = 0.0;
};

/// Runs one closed-loop scenario: saturating-tire plant, reference path,
/// cascaded controller fed per the scenario mode, and (in EHGO mode) the
/// two extended observers, all advanced by one shared fixed-step RK4.
/// Throws std::invalid_argument on scenario validation failure.
SimResult run_scenario(const Scenario& sc);

}  // namespace latsim
