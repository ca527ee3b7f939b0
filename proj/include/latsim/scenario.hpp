#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latsim/controller.hpp"
#include "latsim/error_model.hpp"
#include "latsim/observer.hpp"
#include "latsim/reference_path.hpp"
#include "latsim/vehicle_model.hpp"

namespace latsim {

/// How the steering command is produced.
enum class ControlMode {
  kEhgo,           // observer estimates feed the composite law (default)
  kExactFeedback,  // ground-truth errors and disturbances feed the composite law
  kReducedLateral, // ground truth feeds the reduced law (u = nu_h)
};

std::string to_string(ControlMode m);
ControlMode control_mode_from_string(const std::string& s);

/// Initial tracking errors; the plant pose is constructed from them.
/// z2(0) follows as y_dot + nu_x * z3.
struct InitialConditions {
  double z1 = 0.0;     // initial lateral offset [m]
  double z3 = 0.0;     // initial heading error [rad]
  double y_dot = 0.0;  // initial body lateral velocity [m/s]
  double z4 = 0.0;     // initial yaw-rate error [rad/s]
  ObserverState observer;  // observer start, zeros by default
};

/// Optional additive Gaussian noise on the measured z1/z3, sampled once per
/// step and held through the step.
struct NoiseConfig {
  bool enabled = false;
  double std_z1 = 0.0;  // [m]
  double std_z3 = 0.0;  // [rad]
  std::uint64_t seed = 1;
};

/// Integration and logging setup.
struct SimConfig {
  double dt = 1e-3;            // fixed step [s]
  double horizon = 60.0;       // run length [s]
  int log_stride = 1;          // store every n-th step (>= 1)
  double control_rate_hz = 0;  // 0 = recompute steering every step
  bool measurement_hold = false;  // hold measured z1/z3 across a step
};

/// Complete description of one closed-loop run.
struct Scenario {
  std::string name = "unnamed";
  VehicleParams vehicle;
  UncertaintySpec uncertainty;
  double nu_x = 10.0;             // longitudinal speed [m/s]
  PiecewiseProfile curvature;     // kappa(t) [1/m]
  PiecewiseProfile banking;       // phi(t) [rad]
  double beta_x = 0.0;            // longitudinal slip ratio [-]
  InitialConditions initial;
  ControllerParams controller;
  ObserverGains observer;
  SimConfig sim;
  NoiseConfig noise;
  ControlMode mode = ControlMode::kEhgo;
  double comfort_accel_max = 3.0;  // bound on |kappa| * nu_x^2 [m/s^2]

  /// All invariant violations, each naming the offending field and bound.
  std::vector<std::string> validation_errors() const;
  /// Throws std::invalid_argument listing every violation.
  void validate() const;
};

/// Built-in demonstration scenarios.
Scenario make_flat_lot();
Scenario make_inclined_road();
Scenario make_banked_speedway();
/// Preset by name; throws std::invalid_argument for unknown names.
Scenario make_preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace latsim
