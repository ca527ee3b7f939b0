#include "latsim/error_model.hpp"

#include <stdexcept>

namespace latsim {

NominalCoefficients nominal_coefficients(const VehicleParams& p, double nu_x) {
  p.validate();
  if (!(nu_x >= kMinLongitudinalSpeed))
    throw std::invalid_argument("nominal coefficients require nu_x >= minimum longitudinal speed");
  NominalCoefficients c;
  c.nu_x = nu_x;
  c.a22 = -(2.0 * p.cf + 2.0 * p.cr) / (p.m * nu_x);
  c.a23 = -nu_x * c.a22;
  c.a24 = -(2.0 * p.cf * p.lf - 2.0 * p.cr * p.lr) / (p.m * nu_x);
  c.a42 = -(2.0 * p.lf * p.cf - 2.0 * p.lr * p.cr) / (p.iz * nu_x);
  c.a43 = -nu_x * c.a42;
  c.a44 = -(2.0 * p.cf * p.lf * p.lf + 2.0 * p.cr * p.lr * p.lr) / (p.iz * nu_x);
  c.b21 = 2.0 * p.cf / p.m;
  c.b41 = 2.0 * p.cf * p.lf / p.iz;
  const double r = c.b41 / c.b21;
  c.alpha2 = c.a42 - c.a22 * r;
  c.alpha3 = c.a43 - c.a23 * r;
  c.alpha4 = c.a44 - c.a24 * r;
  c.alpha = nu_x + c.a24;
  return c;
}

bool UncertaintySpec::is_identity() const {
  return m_scale == 1.0 && iz_scale == 1.0 && ctilde_f_scale == 1.0 && ctilde_r_scale == 1.0 &&
         mu_scale == 1.0;
}

void UncertaintySpec::validate() const {
  if (!(m_scale > 0.0) || !(iz_scale > 0.0) || !(ctilde_f_scale > 0.0) ||
      !(ctilde_r_scale > 0.0) || !(mu_scale > 0.0)) {
    throw std::invalid_argument("uncertainty scales must be positive");
  }
}

VehicleParams apply_uncertainty(const VehicleParams& nominal, const UncertaintySpec& u) {
  u.validate();
  VehicleParams t = nominal;
  t.m = nominal.m * u.m_scale;
  t.iz = nominal.iz * u.iz_scale;
  t.ctilde_f = nominal.ctilde_f * u.ctilde_f_scale;
  t.ctilde_r = nominal.ctilde_r * u.ctilde_r_scale;
  t.mu = nominal.mu * u.mu_scale;
  // Vertical load keeps the nominal mass: it models the measured static
  // load, not the perturbed one.
  t.fz = nominal.vertical_load();
  return t;
}

Disturbances disturbance_residual(const PlantState& s, double delta, const RoadState& road,
                                  const VehicleParams& true_params,
                                  const NominalCoefficients& nom, const ReferenceState& ref) {
  const PlantRates rates = plant_derivative(s, delta, road, true_params);
  const TrackingErrors z = tracking_errors(s, ref);
  // True error accelerations from the plant truth.
  const double z2_dot_true = rates.y_ddot + s.nu_x * z.z4;
  const double z4_dot_true = rates.psi_ddot - ref.psi_ddot_des;
  // Whatever the nominal linear rows fail to explain is disturbance.
  Disturbances d;
  d.d_lat = z2_dot_true -
            (nom.a22 * z.z2 + nom.a23 * z.z3 + nom.a24 * z.z4 + nom.b21 * delta);
  d.d_yaw = z4_dot_true -
            (nom.a42 * z.z2 + nom.a43 * z.z3 + nom.a44 * z.z4 + nom.b41 * delta);
  return d;
}

}  // namespace latsim
