#include "latsim/reference_path.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "latsim/integrator.hpp"

namespace latsim {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kTimeSlack = 1e-9;  // tolerated float drift at segment/horizon edges
}  // namespace

double wrap_angle(double a) {
  double w = std::remainder(a, kTwoPi);  // (-pi, pi) plus the +/-pi edge
  if (w <= -kPi) w += kTwoPi;
  return w;
}

PiecewiseProfile::PiecewiseProfile(std::vector<ProfileSegment> segments)
    : segments_(std::move(segments)) {
  double t0 = 0.0, v0 = 0.0, acc = 0.0;
  starts_.reserve(segments_.size());
  for (const auto& seg : segments_) {
    if (!(seg.duration > 0.0)) throw std::invalid_argument("profile segment duration must be positive");
    if (seg.type == ProfileSegment::Type::kSinusoid && !(seg.period > 0.0))
      throw std::invalid_argument("sinusoid segment period must be positive");
    starts_.push_back({t0, v0, acc});
    const double T = seg.duration;
    switch (seg.type) {
      case ProfileSegment::Type::kConstant:
        acc += seg.value * T;
        v0 = seg.value;
        break;
      case ProfileSegment::Type::kRamp:
        acc += 0.5 * (v0 + seg.value) * T;
        v0 = seg.value;
        break;
      case ProfileSegment::Type::kSinusoid: {
        const double w = kTwoPi / seg.period;
        // integral of v0 + A sin(w t + phase) over the segment
        acc += v0 * T + seg.amplitude / w * (std::cos(seg.phase) - std::cos(w * T + seg.phase));
        v0 = v0 + seg.amplitude * std::sin(w * T + seg.phase);
        break;
      }
    }
    t0 += T;
  }
  duration_ = t0;
}

std::size_t PiecewiseProfile::segment_index(double t) const {
  // Hold the final value beyond the declared duration.
  if (segments_.empty()) throw std::logic_error("empty profile");
  std::size_t lo = 0, hi = segments_.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi + 1) / 2;
    if (t >= starts_[mid].t0) lo = mid; else hi = mid - 1;
  }
  return lo;
}

double PiecewiseProfile::value(double t) const {
  if (segments_.empty()) return 0.0;
  t = std::clamp(t, 0.0, duration_);
  const std::size_t i = segment_index(t);
  const auto& seg = segments_[i];
  const auto& st = starts_[i];
  const double u = t - st.t0;
  switch (seg.type) {
    case ProfileSegment::Type::kConstant:
      return seg.value;
    case ProfileSegment::Type::kRamp:
      return st.v0 + (seg.value - st.v0) * u / seg.duration;
    case ProfileSegment::Type::kSinusoid:
      return st.v0 + seg.amplitude * std::sin(kTwoPi / seg.period * u + seg.phase);
  }
  return 0.0;
}

double PiecewiseProfile::rate(double t) const {
  if (segments_.empty()) return 0.0;
  if (t < 0.0 || t > duration_) return 0.0;
  const std::size_t i = segment_index(t);
  const auto& seg = segments_[i];
  const auto& st = starts_[i];
  switch (seg.type) {
    case ProfileSegment::Type::kConstant:
      return 0.0;
    case ProfileSegment::Type::kRamp:
      return (seg.value - st.v0) / seg.duration;
    case ProfileSegment::Type::kSinusoid: {
      const double w = kTwoPi / seg.period;
      return seg.amplitude * w * std::cos(w * (t - st.t0) + seg.phase);
    }
  }
  return 0.0;
}

double PiecewiseProfile::integral(double t) const {
  if (segments_.empty()) return 0.0;
  double extra = 0.0;
  if (t > duration_) {  // held final value
    extra = (t - duration_) * value(duration_);
    t = duration_;
  }
  t = std::max(t, 0.0);
  const std::size_t i = segment_index(t);
  const auto& seg = segments_[i];
  const auto& st = starts_[i];
  const double u = t - st.t0;
  double part = 0.0;
  switch (seg.type) {
    case ProfileSegment::Type::kConstant:
      part = seg.value * u;
      break;
    case ProfileSegment::Type::kRamp: {
      const double slope = (seg.value - st.v0) / seg.duration;
      part = st.v0 * u + 0.5 * slope * u * u;
      break;
    }
    case ProfileSegment::Type::kSinusoid: {
      const double w = kTwoPi / seg.period;
      part = st.v0 * u + seg.amplitude / w * (std::cos(seg.phase) - std::cos(w * u + seg.phase));
      break;
    }
  }
  return st.integral0 + part + extra;
}

double PiecewiseProfile::max_abs() const {
  // Sampled bound; segment forms are smooth enough for validation purposes.
  double m = 0.0;
  const int n = 2048;
  for (int k = 0; k <= n; ++k)
    m = std::max(m, std::abs(value(duration_ * k / n)));
  return m;
}

ReferencePath::ReferencePath(PiecewiseProfile kappa_profile, double nu_x)
    : kappa_(std::move(kappa_profile)), nu_x_(nu_x) {
  if (!(nu_x_ >= kMinLongitudinalSpeed))
    throw std::invalid_argument("reference path speed below minimum longitudinal speed");
}

void ReferencePath::build_pose_table(double grid_dt) const {
  const std::size_t half_steps = static_cast<std::size_t>(std::ceil(
      (kappa_.duration() + kTimeSlack) / (grid_dt / 2.0)));
  xs_.assign(half_steps + 1, 0.0);
  ys_.assign(half_steps + 1, 0.0);
  std::array<double, 2> pose{0.0, 0.0};
  auto f = [&](double t, const std::array<double, 2>&) {
    return std::array<double, 2>{nu_x_ * std::cos(psi_des(t)), nu_x_ * std::sin(psi_des(t))};
  };
  for (std::size_t k = 0; k < half_steps; ++k) {
    xs_[k] = pose[0];
    ys_[k] = pose[1];
    pose = rk4_step(f, k * (grid_dt / 2.0), pose, grid_dt / 2.0);
  }
  xs_[half_steps] = pose[0];
  ys_[half_steps] = pose[1];
  table_dt_ = grid_dt;
}

ReferenceState ReferencePath::state_at(double t, double grid_dt) const {
  if (t < -kTimeSlack || t > kappa_.duration() + kTimeSlack)
    throw std::out_of_range("reference time outside profile horizon");
  t = std::clamp(t, 0.0, kappa_.duration());
  if (table_dt_ != grid_dt || xs_.empty()) build_pose_table(grid_dt);
  ReferenceState r;
  r.t = t;
  r.kappa = kappa_.value(t);
  r.psi_des = psi_des(t);
  r.psi_dot_des = psi_dot_des(t);
  r.psi_ddot_des = psi_ddot_des(t);
  r.ay_des = ay_des(t);
  const double idx = t / (grid_dt / 2.0);
  const std::size_t k = std::min(static_cast<std::size_t>(std::llround(idx)), xs_.size() - 1);
  r.x_des = xs_[k];
  r.y_des = ys_[k];
  return r;
}

TrackingErrors tracking_errors(const PlantState& s, const ReferenceState& ref) {
  TrackingErrors e;
  const double dx = s.x - ref.x_des;
  const double dy = s.y - ref.y_des;
  e.z1 = -std::sin(ref.psi_des) * dx + std::cos(ref.psi_des) * dy;
  e.z3 = wrap_angle(s.psi - ref.psi_des);
  e.z2 = s.y_dot + s.nu_x * e.z3;
  e.z4 = s.psi_dot - ref.psi_dot_des;
  return e;
}

}  // namespace latsim
