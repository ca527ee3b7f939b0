#pragma once

#include <cstddef>
#include <vector>

#include "latsim/vehicle_model.hpp"

namespace latsim {

/// One piece of a piecewise curvature (or banking) profile, parameterized
/// by time. Ramp interpolates linearly from the previous piece's end value;
/// sinusoid oscillates around the previous end value.
struct ProfileSegment {
  enum class Type { kConstant, kRamp, kSinusoid };
  Type type = Type::kConstant;
  double duration = 0.0;   // segment length [s]
  double value = 0.0;      // constant: level; ramp: end value
  double amplitude = 0.0;  // sinusoid amplitude
  double period = 0.0;     // sinusoid period [s]
  double phase = 0.0;      // sinusoid phase offset [rad]
};

/// Piecewise scalar profile of time with exact per-segment integrals.
/// Used for path curvature kappa(t) and for road banking phi(t).
/// Evaluation beyond the declared duration holds the final value.
class PiecewiseProfile {
 public:
  PiecewiseProfile() = default;
  explicit PiecewiseProfile(std::vector<ProfileSegment> segments);

  double duration() const { return duration_; }
  const std::vector<ProfileSegment>& segments() const { return segments_; }

  /// Profile value at time t.
  double value(double t) const;
  /// Time derivative of the profile at t (left-continuous at breakpoints).
  double rate(double t) const;
  /// Exact integral of the profile over [0, t].
  double integral(double t) const;
  /// Extreme absolute value over the profile (for validation bounds).
  double max_abs() const;

 private:
  struct SegmentStart {
    double t0 = 0.0;        // segment start time
    double v0 = 0.0;        // value at segment start
    double integral0 = 0.0; // integral accumulated before the segment
  };
  std::size_t segment_index(double t) const;

  std::vector<ProfileSegment> segments_;
  std::vector<SegmentStart> starts_;
  double duration_ = 0.0;
};

/// Everything the controller and logger need to know about the desired
/// motion at one instant.
struct ReferenceState {
  double t = 0.0;
  double kappa = 0.0;         // path curvature [1/m]
  double psi_des = 0.0;       // desired heading [rad]
  double psi_dot_des = 0.0;   // desired yaw rate [rad/s]
  double psi_ddot_des = 0.0;  // desired yaw acceleration [rad/s^2]
  double ay_des = 0.0;        // desired lateral acceleration [m/s^2]
  double x_des = 0.0;         // reference position x [m]
  double y_des = 0.0;         // reference position y [m]
};

/// Path-relative error coordinates: lateral offset, its rate, heading error
/// (wrapped), and yaw-rate error.
struct TrackingErrors {
  double z1 = 0.0;  // lateral offset, positive left of the path tangent [m]
  double z2 = 0.0;  // offset rate y_dot + nu_x * z3 [m/s]
  double z3 = 0.0;  // heading error wrapped to (-pi, pi] [rad]
  double z4 = 0.0;  // yaw-rate error [rad/s]
};

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

/// Desired trajectory generated by running a curvature profile at constant
/// speed. Heading quantities are exact per-segment integrals; the reference
/// position is integrated on a fixed grid with the classical fourth-order
/// scheme and cached.
class ReferencePath {
 public:
  ReferencePath(PiecewiseProfile kappa_profile, double nu_x);

  double nu_x() const { return nu_x_; }
  double horizon() const { return kappa_.duration(); }
  const PiecewiseProfile& curvature_profile() const { return kappa_; }

  double kappa(double t) const { return kappa_.value(t); }
  double psi_des(double t) const { return nu_x_ * kappa_.integral(t); }
  double psi_dot_des(double t) const { return nu_x_ * kappa_.value(t); }
  double psi_ddot_des(double t) const { return nu_x_ * kappa_.rate(t); }
  double ay_des(double t) const { return kappa_.value(t) * nu_x_ * nu_x_; }

  /// Full reference state at t, with the pose read from the cached grid.
  /// Throws std::out_of_range when t is outside [0, horizon] (small slack).
  ReferenceState state_at(double t, double grid_dt = 1e-3) const;

 private:
  void build_pose_table(double grid_dt) const;

  PiecewiseProfile kappa_;
  double nu_x_;
  mutable double table_dt_ = 0.0;
  mutable std::vector<double> xs_, ys_;  // pose at k * table_dt_ / 2
};

/// Error coordinates of a plant state relative to a reference state taken
/// at the same instant.
TrackingErrors tracking_errors(const PlantState& s, const ReferenceState& ref);

}  // namespace latsim
