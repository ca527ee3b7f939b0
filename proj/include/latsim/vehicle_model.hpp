#pragma once

#include <stdexcept>

namespace latsim {

// Longitudinal speed floor below which the slip-angle kinematics degenerate.
inline constexpr double kMinLongitudinalSpeed = 0.5;  // [m/s]

// Tire side-slip magnitude treated as a hard model-validity violation.
// tan() blows up near 90 deg; anything past 85 deg means the scenario has
// left the regime the lateral model is meaningful in, so we abort instead
// of clamping.
inline constexpr double kSlipDomainLimit = 85.0 * 3.14159265358979323846 / 180.0;  // [rad]

/// Physical parameters of the single-track (bicycle) lateral model.
struct VehicleParams {
  double m = 1800.0;         // total mass [kg]
  double iz = 3270.0;        // yaw inertia about CG [kg m^2]
  double lf = 1.2;           // CG to front axle [m]
  double lr = 1.65;          // CG to rear axle [m]
  double cf = 60000.0;       // nominal per-tire front cornering stiffness [N/rad]
  double cr = 60000.0;       // nominal per-tire rear cornering stiffness [N/rad]
  double ctilde_f = 120000.0;  // front axle stiffness used by the tire model [N/rad]
  double ctilde_r = 120000.0;  // rear axle stiffness used by the tire model [N/rad]
  double cx = 100000.0;      // longitudinal tire stiffness [N]
  double mu = 0.9;           // road friction coefficient [-]
  double fz = 0.0;           // vertical tire load [N]; 0 resolves to m*g/4
  double g = 9.81;           // gravitational acceleration [m/s^2]

  /// Returns the vertical load, applying the m*g/4 default when unset.
  double vertical_load() const { return fz > 0.0 ? fz : m * g / 4.0; }

  /// Throws std::invalid_argument when a parameter is out of its physical range.
  void validate() const;
};

/// Plant state in body/world coordinates. Longitudinal speed is held
/// constant for a run and carried here so slip computations stay local.
struct PlantState {
  double y_dot = 0.0;    // lateral velocity in body frame [m/s]
  double psi = 0.0;      // yaw angle [rad]
  double psi_dot = 0.0;  // yaw rate [rad/s]
  double x = 0.0;        // world position x [m]
  double y = 0.0;        // world position y [m]
  double nu_x = 10.0;    // longitudinal speed, constant per run [m/s]
};

/// Road state at the current instant.
struct RoadState {
  double phi = 0.0;     // banking angle, positive banks the road toward +y [rad]
  double beta_x = 0.0;  // longitudinal slip ratio, > -1 [-]
};

/// Exact and linearized tire side-slip angles, front and rear.
struct SlipAngles {
  double front = 0.0;         // exact front slip angle [rad]
  double rear = 0.0;          // exact rear slip angle [rad]
  double front_linear = 0.0;  // small-angle front slip [rad]
  double rear_linear = 0.0;   // small-angle rear slip [rad]
};

/// Per-axle lateral force split into the nominal linear part and the
/// perturbation the full tire model adds on top of it.
struct TireForces {
  SlipAngles slip;
  double front = 0.0;          // total front lateral force [N]
  double rear = 0.0;           // total rear lateral force [N]
  double front_nominal = 0.0;  // linear-model front force [N]
  double rear_nominal = 0.0;   // linear-model rear force [N]
  double front_pert = 0.0;     // front - front_nominal [N]
  double rear_pert = 0.0;      // rear - rear_nominal [N]
};

/// Time derivative of the plant state.
struct PlantRates {
  double y_ddot = 0.0;    // lateral acceleration in body frame [m/s^2]
  double psi_dot = 0.0;   // yaw rate [rad/s]
  double psi_ddot = 0.0;  // yaw acceleration [rad/s^2]
  double x_dot = 0.0;     // world velocity x [m/s]
  double y_dot = 0.0;     // world velocity y [m/s]
  TireForces tires;       // forces evaluated at this state
};

/// Exact and linearized slip angles at the given steering angle.
/// Throws std::domain_error when nu_x < kMinLongitudinalSpeed or when an
/// exact slip angle reaches pi/2.
SlipAngles slip_angles(const PlantState& s, double delta, const VehicleParams& p);

/// Friction-saturation shaping function: (2-g)*g below 1, clamped to 1 above.
/// Throws std::domain_error for negative arguments.
double dugoff_shaping(double gamma);

/// Per-axle lateral forces from the saturating tire model, decomposed into
/// nominal linear part plus perturbation. Throws std::domain_error when a
/// slip angle exceeds the tan() guard at kSlipDomainLimit.
TireForces tire_lateral_forces(const PlantState& s, double delta, const RoadState& road,
                               const VehicleParams& p);

/// Full plant derivative: lateral/yaw dynamics plus world-frame kinematics.
/// Banking enters as the gravity component g*sin(phi) on lateral acceleration.
PlantRates plant_derivative(const PlantState& s, double delta, const RoadState& road,
                            const VehicleParams& p);

}  // namespace latsim
