#pragma once

#include "latsim/error_model.hpp"

namespace latsim {

/// Returns true when s^3 + c1 s^2 + c2 s + c3 has all roots in the open
/// left half plane (Routh conditions for a cubic).
bool hurwitz_cubic(double c1, double c2, double c3);

/// Gains of the two cascaded extended high-gain observers. (h1,h2,h3) drive
/// the lateral channel, (g1,g2,g3) the yaw channel; epsilon sets the
/// time-scale separation.
struct ObserverGains {
  double h1 = 2.0, h2 = 1.0, h3 = 0.5;
  double g1 = 2.0, g2 = 1.0, g3 = 0.5;
  double epsilon = 0.005;  // (0, 1]

  /// Throws std::invalid_argument unless both gain triples are Hurwitz and
  /// epsilon lies in (0, 1].
  void validate() const;
};

/// Observer state: estimated error coordinates plus estimated disturbances.
struct ObserverState {
  double z1_hat = 0.0;     // [m]
  double z2_hat = 0.0;     // [m/s]
  double d_lat_hat = 0.0;  // [m/s^2]
  double z3_hat = 0.0;     // [rad]
  double z4_hat = 0.0;     // [rad/s]
  double d_yaw_hat = 0.0;  // [rad/s^2]
};

/// Right-hand side of the two extended observers driven by the measured
/// lateral offset and heading error and the applied (saturated) steering.
/// The model-copy rows use the cross-coupled estimates from both channels;
/// the disturbance rows are pure innovation integrators.
ObserverState ehgo_derivative(const ObserverState& o, double z1_meas, double z3_meas,
                              double delta, const NominalCoefficients& nom,
                              const ObserverGains& gains);

}  // namespace latsim
