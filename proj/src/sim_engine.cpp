#include "latsim/sim_engine.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <random>

#include "latsim/integrator.hpp"

namespace latsim {

namespace {

// Composite integration state: plant (5), reference pose (2), observer (6).
// The reference heading chain is closed form, so only its pose needs to be
// integrated alongside the plant.
constexpr std::size_t kStateSize = 13;
using State = std::array<double, kStateSize>;

enum StateIndex : std::size_t {
  kYDot = 0,
  kPsi,
  kPsiDot,
  kX,
  kY,
  kXDes,
  kYDes,
  kObsBase,  // z1_hat .. d_yaw_hat occupy [kObsBase, kObsBase + 6)
};

PlantState plant_of(const State& s, double nu_x) {
  return {s[kYDot], s[kPsi], s[kPsiDot], s[kX], s[kY], nu_x};
}

ObserverState observer_of(const State& s) {
  return {s[kObsBase], s[kObsBase + 1], s[kObsBase + 2],
          s[kObsBase + 3], s[kObsBase + 4], s[kObsBase + 5]};
}

bool all_finite(const State& s) {
  for (double v : s)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace

SimResult run_scenario(const Scenario& sc) {
  sc.validate();
  const auto wall_start = std::chrono::steady_clock::now();

  const VehicleParams truth = apply_uncertainty(sc.vehicle, sc.uncertainty);
  const NominalCoefficients nom = nominal_coefficients(sc.vehicle, sc.nu_x);

  const double dt = sc.sim.dt;
  const long long n_steps = std::max<long long>(1, std::llround(sc.sim.horizon / dt));
  const int stride = sc.sim.log_stride;
  const long long control_every =
      sc.sim.control_rate_hz > 0.0
          ? std::max<long long>(1, std::llround(1.0 / (sc.sim.control_rate_hz * dt)))
          : 1;

  auto ref_at = [&](double t, double x_des, double y_des) {
    ReferenceState r;
    r.t = t;
    r.kappa = sc.curvature.value(t);
    r.psi_des = sc.nu_x * sc.curvature.integral(t);
    r.psi_dot_des = sc.nu_x * r.kappa;
    r.psi_ddot_des = sc.nu_x * sc.curvature.rate(t);
    r.ay_des = r.kappa * sc.nu_x * sc.nu_x;
    r.x_des = x_des;
    r.y_des = y_des;
    return r;
  };

  // psi_des(0) = 0, so the initial offset is purely lateral in world frame.
  State y{};
  y[kYDot] = sc.initial.y_dot;
  y[kPsi] = wrap_angle(sc.initial.z3);
  y[kPsiDot] = sc.nu_x * sc.curvature.value(0.0) + sc.initial.z4;
  y[kX] = 0.0;
  y[kY] = sc.initial.z1;
  y[kXDes] = 0.0;
  y[kYDes] = 0.0;
  y[kObsBase] = sc.initial.observer.z1_hat;
  y[kObsBase + 1] = sc.initial.observer.z2_hat;
  y[kObsBase + 2] = sc.initial.observer.d_lat_hat;
  y[kObsBase + 3] = sc.initial.observer.z3_hat;
  y[kObsBase + 4] = sc.initial.observer.z4_hat;
  y[kObsBase + 5] = sc.initial.observer.d_yaw_hat;

  SimResult result;
  result.log.dt = dt;
  result.log.stride = stride;
  result.log.rows.reserve(static_cast<std::size_t>(n_steps / stride) + 2);

  std::mt19937_64 rng(sc.noise.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // control_rate_hz == 0 is the continuous idealization: the command is
  // recomputed at every RK4 stage so the closed loop stays a smooth ODE.
  // A positive rate emulates a digital controller with zero-order hold.
  const bool continuous_control = sc.sim.control_rate_hz == 0.0;

  // Steering (ZOH only) and per-step measurement samples held through stages.
  double delta_applied = 0.0;
  double noise_z1 = 0.0, noise_z3 = 0.0;
  double held_z1_meas = 0.0, held_z3_meas = 0.0;

  // One-step-lagged ground-truth disturbances for the exact-feedback modes;
  // the first step sees the initial state under zero steering.
  Disturbances d_feed{};
  SteeringCommand cmd{};
  ObserverState est_logged{};

  auto command_at = [&](double t, const State& s) -> SteeringCommand {
    ErrorEstimates est;
    if (sc.mode == ControlMode::kEhgo) {
      est = ErrorEstimates::from_observer(observer_of(s));
    } else {
      const TrackingErrors z =
          tracking_errors(plant_of(s, sc.nu_x), ref_at(t, s[kXDes], s[kYDes]));
      est = {z.z1, z.z2, z.z3, z.z4, d_feed.d_lat, d_feed.d_yaw};
    }
    return sc.mode == ControlMode::kReducedLateral
               ? reduced_steering_command(est, nom, sc.controller)
               : steering_command(est, nom, sc.controller);
  };

  auto deriv = [&](double t, const State& s) -> State {
    State d{};
    const double delta = continuous_control ? command_at(t, s).delta : delta_applied;
    const PlantState plant = plant_of(s, sc.nu_x);
    const RoadState road{sc.banking.value(t), sc.beta_x};
    const PlantRates pr = plant_derivative(plant, delta, road, truth);
    d[kYDot] = pr.y_ddot;
    d[kPsi] = pr.psi_dot;
    d[kPsiDot] = pr.psi_ddot;
    d[kX] = pr.x_dot;
    d[kY] = pr.y_dot;
    const double psi_des = sc.nu_x * sc.curvature.integral(t);
    d[kXDes] = sc.nu_x * std::cos(psi_des);
    d[kYDes] = sc.nu_x * std::sin(psi_des);
    if (sc.mode == ControlMode::kEhgo) {
      double z1m = held_z1_meas;
      double z3m = held_z3_meas;
      if (!sc.sim.measurement_hold) {
        const TrackingErrors z = tracking_errors(plant, ref_at(t, s[kXDes], s[kYDes]));
        z1m = z.z1 + noise_z1;
        z3m = z.z3 + noise_z3;
      }
      const ObserverState od = ehgo_derivative(observer_of(s), z1m, z3m, delta, nom, sc.observer);
      d[kObsBase] = od.z1_hat;
      d[kObsBase + 1] = od.z2_hat;
      d[kObsBase + 2] = od.d_lat_hat;
      d[kObsBase + 3] = od.z3_hat;
      d[kObsBase + 4] = od.z4_hat;
      d[kObsBase + 5] = od.d_yaw_hat;
    }
    return d;
  };

  auto make_row = [&](double t, const TrackingErrors& z, const Disturbances& d,
                      const ReferenceState& ref, const RoadState& road) {
    const PlantState plant = plant_of(y, sc.nu_x);
    LogRow row;
    row.t = t;
    row.y_dot = plant.y_dot;
    row.psi = plant.psi;
    row.psi_dot = plant.psi_dot;
    row.x = plant.x;
    row.y = plant.y;
    row.x_des = ref.x_des;
    row.y_des = ref.y_des;
    row.psi_des = ref.psi_des;
    row.psi_dot_des = ref.psi_dot_des;
    row.psi_ddot_des = ref.psi_ddot_des;
    row.kappa = ref.kappa;
    row.ay_des = ref.ay_des;
    row.phi = road.phi;
    row.z1 = z.z1;
    row.z2 = z.z2;
    row.z3 = z.z3;
    row.z4 = z.z4;
    row.d_lat = d.d_lat;
    row.d_yaw = d.d_yaw;
    row.z1_meas = held_z1_meas;
    row.z3_meas = held_z3_meas;
    row.z1_hat = est_logged.z1_hat;
    row.z2_hat = est_logged.z2_hat;
    row.d_lat_hat = est_logged.d_lat_hat;
    row.z3_hat = est_logged.z3_hat;
    row.z4_hat = est_logged.z4_hat;
    row.d_yaw_hat = est_logged.d_yaw_hat;
    row.e_h1 = z.z1 - est_logged.z1_hat;
    row.e_h3 = z.z3 - est_logged.z3_hat;
    row.nu_h = cmd.nu_h;
    row.z3_des_cmd = cmd.z3_des;
    row.u_d = cmd.u_d;
    row.u = cmd.u;
    row.delta_raw = cmd.delta_raw;
    row.delta = cmd.delta;
    row.saturated = cmd.saturated;
    return row;
  };

  bool last_step_logged = false;
  for (long long k = 0; k <= n_steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const bool final_sample = k == n_steps;
    const PlantState plant = plant_of(y, sc.nu_x);
    const RoadState road{sc.banking.value(t), sc.beta_x};
    const ReferenceState ref = ref_at(t, y[kXDes], y[kYDes]);
    const TrackingErrors z = tracking_errors(plant, ref);

    if (sc.noise.enabled) {
      noise_z1 = sc.noise.std_z1 > 0.0 ? sc.noise.std_z1 * gauss(rng) : 0.0;
      noise_z3 = sc.noise.std_z3 > 0.0 ? sc.noise.std_z3 * gauss(rng) : 0.0;
    }
    held_z1_meas = z.z1 + noise_z1;
    held_z3_meas = z.z3 + noise_z3;

    Disturbances d_now = d_feed;
    try {
      if (continuous_control || k % control_every == 0 || final_sample) {
        cmd = command_at(t, y);
        delta_applied = cmd.delta;
      }
      // The estimate columns always show what the law consumes: observer
      // states in EHGO mode, truth plus lagged disturbances otherwise.
      est_logged = sc.mode == ControlMode::kEhgo
                       ? observer_of(y)
                       : ObserverState{z.z1, z.z2, d_feed.d_lat, z.z3, z.z4, d_feed.d_yaw};
      d_now = disturbance_residual(plant, delta_applied, road, truth, nom, ref);
    } catch (const std::domain_error& ex) {
      result.abort = AbortInfo{t, ex.what()};
      result.log.rows.push_back(make_row(t, z, d_feed, ref, road));
      break;
    }

    last_step_logged = k % stride == 0 || final_sample;
    if (last_step_logged) result.log.rows.push_back(make_row(t, z, d_now, ref, road));
    if (final_sample) break;
    d_feed = d_now;

    try {
      y = rk4_step(deriv, t, y, dt);
    } catch (const std::domain_error& ex) {
      result.abort = AbortInfo{t, ex.what()};
      if (!last_step_logged) result.log.rows.push_back(make_row(t, z, d_now, ref, road));
      break;
    }
    if (!all_finite(y)) {
      result.abort = AbortInfo{t + dt, "non-finite state"};
      if (!last_step_logged) result.log.rows.push_back(make_row(t, z, d_now, ref, road));
      break;
    }
  }

  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return result;
}

}  // namespace latsim
