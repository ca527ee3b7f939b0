#include "latsim/controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace latsim {

void ControllerParams::validate() const {
  if (!(eta1 > 0.0) || !(eta2 > 0.0)) throw std::invalid_argument("eta gains must be positive");
  if (!(tau > 0.0) || tau > 1.0) throw std::invalid_argument("tau must lie in (0, 1]");
  if (!(k3 > 0.0) || !(k4 > 0.0)) throw std::invalid_argument("k3/k4 must be positive");
  if (!(delta_max > 0.0)) throw std::invalid_argument("delta_max must be positive");
}

VirtualControl virtual_controls(const ErrorEstimates& e, const NominalCoefficients& nom,
                                const ControllerParams& cp) {
  VirtualControl v;
  v.nu_h = -cp.tau * cp.tau * cp.eta1 * e.z1 - cp.tau * cp.eta2 * e.z2;
  if (std::abs(nom.alpha3) < 1e-12)
    throw std::domain_error("alpha3 is numerically zero; heading inversion undefined");
  const double r = nom.b_ratio();
  v.z3_des = (-nom.alpha2 * e.z2 - nom.alpha4 * e.z4 + r * e.d_lat - e.d_yaw - r * v.nu_h) /
             nom.alpha3;
  return v;
}

AuxiliaryControl auxiliary_controls(const ErrorEstimates& e, double z3_des,
                                    const NominalCoefficients& nom, const ControllerParams& cp) {
  AuxiliaryControl a;
  a.u_d = -cp.k3 * (e.z3 - z3_des) - cp.k4 * e.z4;
  const double r = nom.b_ratio();
  a.u = (-nom.alpha2 * e.z2 - nom.alpha3 * e.z3 - nom.alpha4 * e.z4 + r * e.d_lat - e.d_yaw +
         a.u_d) /
        r;
  return a;
}

double clamp_steering(double delta_raw, double delta_max) {
  return std::clamp(delta_raw, -delta_max, delta_max);
}

namespace {

SteeringCommand finish_command(const ErrorEstimates& e, double u, const NominalCoefficients& nom,
                               const ControllerParams& cp) {
  SteeringCommand c;
  c.u = u;
  c.delta_raw = (-nom.a22 * e.z2 - nom.a23 * e.z3 - nom.a24 * e.z4 - e.d_lat + u) / nom.b21;
  c.delta = clamp_steering(c.delta_raw, cp.delta_max);
  c.saturated = c.delta != c.delta_raw;
  return c;
}

}  // namespace

SteeringCommand steering_command(const ErrorEstimates& e, const NominalCoefficients& nom,
                                 const ControllerParams& cp) {
  const VirtualControl v = virtual_controls(e, nom, cp);
  const AuxiliaryControl a = auxiliary_controls(e, v.z3_des, nom, cp);
  SteeringCommand c = finish_command(e, a.u, nom, cp);
  c.nu_h = v.nu_h;
  c.z3_des = v.z3_des;
  c.u_d = a.u_d;
  return c;
}

SteeringCommand reduced_steering_command(const ErrorEstimates& e, const NominalCoefficients& nom,
                                         const ControllerParams& cp) {
  const double nu_h = -cp.tau * cp.tau * cp.eta1 * e.z1 - cp.tau * cp.eta2 * e.z2;
  SteeringCommand c = finish_command(e, nu_h, nom, cp);
  c.nu_h = nu_h;
  return c;
}

}  // namespace latsim
