#pragma once

#include "latsim/reference_path.hpp"
#include "latsim/vehicle_model.hpp"

namespace latsim {

/// Coefficients of the linear error dynamics evaluated from nominal vehicle
/// parameters at a fixed longitudinal speed. The alpha_i combine the yaw and
/// lateral rows for the cascaded control law.
struct NominalCoefficients {
  double a22 = 0.0, a23 = 0.0, a24 = 0.0;  // lateral row [1/s], [1/s^2]-scaled
  double a42 = 0.0, a43 = 0.0, a44 = 0.0;  // yaw row
  double b21 = 0.0;                        // lateral steering gain [m/s^2/rad]
  double b41 = 0.0;                        // yaw steering gain [1/s^2/rad]
  double alpha2 = 0.0, alpha3 = 0.0, alpha4 = 0.0;  // a4i - a2i * b41/b21
  double alpha = 0.0;                      // nu_x + a24 [m/s]
  double nu_x = 0.0;                       // speed the row was evaluated at [m/s]

  double b_ratio() const { return b41 / b21; }
};

/// Builds the nominal coefficient set. Throws std::invalid_argument when
/// nu_x < kMinLongitudinalSpeed or parameters are invalid.
NominalCoefficients nominal_coefficients(const VehicleParams& p, double nu_x);

/// Multiplicative perturbations applied to the true plant while the
/// controller and observer keep the nominal values. Unity means no mismatch.
struct UncertaintySpec {
  double m_scale = 1.0;         // mass
  double iz_scale = 1.0;        // yaw inertia
  double ctilde_f_scale = 1.0;  // front tire-model stiffness
  double ctilde_r_scale = 1.0;  // rear tire-model stiffness
  double mu_scale = 1.0;        // friction

  bool is_identity() const;
  void validate() const;  // throws std::invalid_argument on non-positive scales
};

/// True plant parameters under the given perturbations. Nominal cornering
/// stiffnesses cf/cr are left untouched: they define the model the
/// controller believes in, not the plant.
VehicleParams apply_uncertainty(const VehicleParams& nominal, const UncertaintySpec& u);

/// Matched disturbances acting on the lateral and yaw error dynamics.
struct Disturbances {
  double d_lat = 0.0;  // lateral channel [m/s^2]
  double d_yaw = 0.0;  // yaw channel [rad/s^2]
};

/// Ground-truth disturbances as residuals: evaluate the true plant
/// derivative at (state, delta) and subtract the nominal linear model.
/// By construction, adding these back to the nominal rows reproduces the
/// true error accelerations exactly.
Disturbances disturbance_residual(const PlantState& s, double delta, const RoadState& road,
                                  const VehicleParams& true_params,
                                  const NominalCoefficients& nom, const ReferenceState& ref);

}  // namespace latsim
