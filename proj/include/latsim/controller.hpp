#pragma once

#include "latsim/error_model.hpp"
#include "latsim/observer.hpp"

namespace latsim {

/// Gains of the cascaded cancellation controller plus the steering limit.
struct ControllerParams {
  double eta1 = 2835000.0;  // lateral offset gain
  double eta2 = 31500.0;    // offset-rate gain
  double tau = 0.1;         // lateral time-scale parameter (0, 1]
  double k3 = 350000.0;     // heading-error gain
  double k4 = 250000.0;     // yaw-rate gain
  double delta_max = 2.7 * 3.14159265358979323846;  // steering saturation [rad]

  /// Throws std::invalid_argument on non-positive gains, tau outside (0, 1],
  /// or non-positive delta_max.
  void validate() const;
};

/// Inputs to the control law: error-coordinate values and matched
/// disturbances, either observer estimates or ground truth.
struct ErrorEstimates {
  double z1 = 0.0;
  double z2 = 0.0;
  double z3 = 0.0;
  double z4 = 0.0;
  double d_lat = 0.0;
  double d_yaw = 0.0;

  static ErrorEstimates from_observer(const ObserverState& o) {
    return {o.z1_hat, o.z2_hat, o.z3_hat, o.z4_hat, o.d_lat_hat, o.d_yaw_hat};
  }
};

/// Stabilizing virtual input for the lateral subsystem and the heading
/// error that would realize it through the yaw channel.
struct VirtualControl {
  double nu_h = 0.0;    // desired offset acceleration [m/s^2]
  double z3_des = 0.0;  // heading error that achieves nu_h [rad]
};

/// Yaw-channel tracking input and the resulting lateral-channel input.
struct AuxiliaryControl {
  double u_d = 0.0;  // yaw-acceleration command [rad/s^2]
  double u = 0.0;    // lateral-acceleration command [m/s^2]
};

/// Full per-step control trace.
struct SteeringCommand {
  double nu_h = 0.0;
  double z3_des = 0.0;
  double u_d = 0.0;
  double u = 0.0;
  double delta_raw = 0.0;  // before saturation [rad]
  double delta = 0.0;      // applied steering [rad]
  bool saturated = false;
};

/// nu_h from the offset states, and the heading error solving the
/// cancellation equality for that nu_h. Throws std::domain_error when
/// alpha3 is numerically zero.
VirtualControl virtual_controls(const ErrorEstimates& e, const NominalCoefficients& nom,
                                const ControllerParams& cp);

/// u_d tracking z3_des, and the lateral input u with the yaw row cancelled.
AuxiliaryControl auxiliary_controls(const ErrorEstimates& e, double z3_des,
                                    const NominalCoefficients& nom, const ControllerParams& cp);

/// Clamp to [-delta_max, delta_max].
double clamp_steering(double delta_raw, double delta_max);

/// Composite law: virtual + auxiliary controls, lateral-row cancellation,
/// saturation.
SteeringCommand steering_command(const ErrorEstimates& e, const NominalCoefficients& nom,
                                 const ControllerParams& cp);

/// Reduced law that drives the offset subsystem with u = nu_h directly,
/// bypassing the yaw cascade. Used as the linear-response oracle.
SteeringCommand reduced_steering_command(const ErrorEstimates& e, const NominalCoefficients& nom,
                                         const ControllerParams& cp);

}  // namespace latsim
