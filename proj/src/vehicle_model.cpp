#include "latsim/vehicle_model.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace latsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

}  // namespace

void VehicleParams::validate() const {
  if (!(m > 0.0)) fail("vehicle.m must be positive");
  if (!(iz > 0.0)) fail("vehicle.iz must be positive");
  if (!(lf > 0.0)) fail("vehicle.lf must be positive");
  if (!(lr > 0.0)) fail("vehicle.lr must be positive");
  if (!(cf > 0.0)) fail("vehicle.cf must be positive");
  if (!(cr > 0.0)) fail("vehicle.cr must be positive");
  if (!(ctilde_f > 0.0)) fail("vehicle.ctilde_f must be positive");
  if (!(ctilde_r > 0.0)) fail("vehicle.ctilde_r must be positive");
  if (!(cx > 0.0)) fail("vehicle.cx must be positive");
  if (!(mu > 0.0)) fail("vehicle.mu must be positive");
  if (fz < 0.0) fail("vehicle.fz must be non-negative (0 selects m*g/4)");
  if (!(g > 0.0)) fail("vehicle.g must be positive");
}

SlipAngles slip_angles(const PlantState& s, double delta, const VehicleParams& p) {
  if (!(s.nu_x >= kMinLongitudinalSpeed)) {
    throw std::domain_error("nu_x = " + std::to_string(s.nu_x) +
                            " below minimum longitudinal speed " +
                            std::to_string(kMinLongitudinalSpeed));
  }
  const double qf = (s.y_dot + p.lf * s.psi_dot) / s.nu_x;
  const double qr = (s.y_dot - p.lr * s.psi_dot) / s.nu_x;
  SlipAngles a;
  a.front = delta - std::atan(qf);
  a.rear = -std::atan(qr);
  a.front_linear = delta - qf;
  a.rear_linear = -qr;
  if (!(std::abs(a.front) < kPi / 2.0) || !(std::abs(a.rear) < kPi / 2.0)) {
    throw std::domain_error("tire slip angle reached pi/2; lateral model invalid");
  }
  return a;
}

double dugoff_shaping(double gamma) {
  if (std::isnan(gamma) || gamma < 0.0) {
    throw std::domain_error("friction saturation parameter must be non-negative");
  }
  return gamma < 1.0 ? (2.0 - gamma) * gamma : 1.0;
}

TireForces tire_lateral_forces(const PlantState& s, double delta, const RoadState& road,
                               const VehicleParams& p) {
  TireForces f;
  f.slip = slip_angles(s, delta, p);
  if (std::abs(f.slip.front) >= kSlipDomainLimit || std::abs(f.slip.rear) >= kSlipDomainLimit) {
    throw std::domain_error("tire slip angle beyond tan() guard; lateral model invalid");
  }

  const double fz = p.vertical_load();
  const double one_plus_bx = 1.0 + road.beta_x;
  if (!(one_plus_bx > 0.0)) throw std::domain_error("beta_x must exceed -1");
  const double cy = p.ctilde_f + p.ctilde_r;

  auto axle_force = [&](double slip, double c_axle) {
    const double ts = std::tan(slip);
    const double denom = 2.0 * std::hypot(p.cx * road.beta_x, cy * ts);
    const double gamma = denom > 0.0 ? p.mu * one_plus_bx * fz / denom
                                     : std::numeric_limits<double>::infinity();
    return c_axle * ts * dugoff_shaping(gamma) / one_plus_bx;
  };

  f.front = axle_force(f.slip.front, p.ctilde_f);
  f.rear = axle_force(f.slip.rear, p.ctilde_r);
  f.front_nominal = 2.0 * p.cf * f.slip.front_linear;
  f.rear_nominal = 2.0 * p.cr * f.slip.rear_linear;
  f.front_pert = f.front - f.front_nominal;
  f.rear_pert = f.rear - f.rear_nominal;
  return f;
}

PlantRates plant_derivative(const PlantState& s, double delta, const RoadState& road,
                            const VehicleParams& p) {
  PlantRates r;
  r.tires = tire_lateral_forces(s, delta, road, p);
  // Lateral force balance with banking as a gravity component; the yaw-rate
  // coupling comes from expressing the acceleration in the body frame.
  r.y_ddot = (r.tires.front + r.tires.rear) / p.m + p.g * std::sin(road.phi) -
             s.nu_x * s.psi_dot;
  r.psi_dot = s.psi_dot;
  r.psi_ddot = (p.lf * r.tires.front - p.lr * r.tires.rear) / p.iz;
  const double c = std::cos(s.psi), sn = std::sin(s.psi);
  r.x_dot = s.nu_x * c - s.y_dot * sn;
  r.y_dot = s.nu_x * sn + s.y_dot * c;
  return r;
}

}  // namespace latsim
