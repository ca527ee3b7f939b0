#include <cmath>
#include <random>

#include <doctest.h>

#include "latsim/error_model.hpp"

using namespace latsim;

TEST_CASE("nominal coefficients reproduce hand-evaluated values at 10 m/s") {
  VehicleParams p;
  const NominalCoefficients c = nominal_coefficients(p, 10.0);

  // each recomputed here from first principles with independent arithmetic
  CHECK(c.a22 == doctest::Approx(-240000.0 / 18000.0).epsilon(1e-15));
  CHECK(c.a22 == doctest::Approx(-13.3333333333).epsilon(1e-10));
  CHECK(c.a23 == doctest::Approx(133.3333333333).epsilon(1e-10));
  CHECK(c.a24 == doctest::Approx(-(144000.0 - 198000.0) / 18000.0).epsilon(1e-15));
  CHECK(c.a24 == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(c.a42 == doctest::Approx(54000.0 / 32700.0).epsilon(1e-14));
  CHECK(c.a43 == doctest::Approx(-540000.0 / 32700.0).epsilon(1e-14));
  CHECK(c.a44 == doctest::Approx(-499500.0 / 32700.0).epsilon(1e-14));
  CHECK(c.b21 == doctest::Approx(120000.0 / 1800.0).epsilon(1e-15));
  CHECK(c.b21 == doctest::Approx(66.6667).epsilon(1e-5));
  CHECK(c.b41 == doctest::Approx(144000.0 / 3270.0).epsilon(1e-15));

  const double r = c.b41 / c.b21;
  CHECK(c.b_ratio() == doctest::Approx(r).epsilon(1e-15));
  CHECK(c.alpha2 == doctest::Approx(c.a42 - c.a22 * r).epsilon(1e-15));
  CHECK(c.alpha3 == doctest::Approx(c.a43 - c.a23 * r).epsilon(1e-15));
  CHECK(c.alpha4 == doctest::Approx(c.a44 - c.a24 * r).epsilon(1e-15));
  CHECK(c.alpha == doctest::Approx(13.0).epsilon(1e-14));
  CHECK(c.nu_x == 10.0);
}

TEST_CASE("nominal coefficients scale with speed as 1/nu and nu") {
  VehicleParams p;
  const NominalCoefficients a = nominal_coefficients(p, 5.0);
  const NominalCoefficients b = nominal_coefficients(p, 10.0);
  CHECK(a.a22 == doctest::Approx(2.0 * b.a22).epsilon(1e-14));
  CHECK(a.a23 == doctest::Approx(b.a23).epsilon(1e-14));  // -nu * a22 cancels the 1/nu
  CHECK(a.a44 == doctest::Approx(2.0 * b.a44).epsilon(1e-14));
  CHECK(a.b21 == b.b21);  // steering gains are speed-independent
  CHECK(a.b41 == b.b41);

  CHECK_THROWS_AS(nominal_coefficients(p, 0.1), std::invalid_argument);
  VehicleParams bad = p;
  bad.iz = 0.0;
  CHECK_THROWS_AS(nominal_coefficients(bad, 10.0), std::invalid_argument);
}

TEST_CASE("uncertainty scales the true plant but not the believed model") {
  VehicleParams nominal;
  UncertaintySpec u;
  CHECK(u.is_identity());
  u.m_scale = 1.1;
  u.iz_scale = 0.9;
  u.ctilde_f_scale = 1.2;
  u.ctilde_r_scale = 0.8;
  u.mu_scale = 0.7;
  CHECK_FALSE(u.is_identity());

  const VehicleParams t = apply_uncertainty(nominal, u);
  CHECK(t.m == doctest::Approx(1800.0 * 1.1).epsilon(1e-15));
  CHECK(t.iz == doctest::Approx(3270.0 * 0.9).epsilon(1e-15));
  CHECK(t.ctilde_f == doctest::Approx(120000.0 * 1.2).epsilon(1e-15));
  CHECK(t.ctilde_r == doctest::Approx(120000.0 * 0.8).epsilon(1e-15));
  CHECK(t.mu == doctest::Approx(0.9 * 0.7).epsilon(1e-15));
  // the linear-model stiffnesses define what the controller believes in
  CHECK(t.cf == nominal.cf);
  CHECK(t.cr == nominal.cr);
  // vertical load stays the measured static value, not the perturbed mass
  CHECK(t.fz == doctest::Approx(nominal.m * nominal.g / 4.0).epsilon(1e-15));

  UncertaintySpec bad;
  bad.mu_scale = 0.0;
  CHECK_THROWS_AS(apply_uncertainty(nominal, bad), std::invalid_argument);
}

TEST_CASE("disturbance residuals close the loop back to the true accelerations") {
  // Whatever d the residual reports, nominal rows + d must reproduce the
  // true error accelerations exactly. Checked here with both sides
  // recomputed from scratch.
  VehicleParams nominal;
  UncertaintySpec u;
  u.m_scale = 1.15;
  u.ctilde_f_scale = 0.9;
  u.mu_scale = 0.85;
  const VehicleParams truth = apply_uncertainty(nominal, u);
  const double nu = 10.0;
  const NominalCoefficients nom = nominal_coefficients(nominal, nu);

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> small(-0.2, 0.2);
  for (int i = 0; i < 300; ++i) {
    PlantState s;
    s.nu_x = nu;
    s.y_dot = small(rng);
    s.psi = small(rng);
    s.psi_dot = small(rng);
    s.x = 5.0 * small(rng);
    s.y = 5.0 * small(rng);
    ReferenceState ref;
    ref.psi_des = small(rng);
    ref.psi_dot_des = 0.1 * small(rng);
    ref.psi_ddot_des = 0.1 * small(rng);
    ref.x_des = s.x + small(rng);
    ref.y_des = s.y + small(rng);
    RoadState road;
    road.phi = 0.3 * small(rng);
    const double delta = 0.1 * small(rng);

    const Disturbances d = disturbance_residual(s, delta, road, truth, nom, ref);
    const PlantRates rates = plant_derivative(s, delta, road, truth);
    const TrackingErrors z = tracking_errors(s, ref);
    const double z2_dot_true = rates.y_ddot + nu * z.z4;
    const double z4_dot_true = rates.psi_ddot - ref.psi_ddot_des;
    const double z2_dot_model =
        nom.a22 * z.z2 + nom.a23 * z.z3 + nom.a24 * z.z4 + nom.b21 * delta + d.d_lat;
    const double z4_dot_model =
        nom.a42 * z.z2 + nom.a43 * z.z3 + nom.a44 * z.z4 + nom.b41 * delta + d.d_yaw;
    CHECK(std::abs(z2_dot_model - z2_dot_true) <= 1e-12 * std::max(1.0, std::abs(z2_dot_true)));
    CHECK(std::abs(z4_dot_model - z4_dot_true) <= 1e-12 * std::max(1.0, std::abs(z4_dot_true)));
  }
}

TEST_CASE("banking alone shows up as the gravity component on the lateral channel") {
  VehicleParams p;
  const NominalCoefficients nom = nominal_coefficients(p, 10.0);
  PlantState s;
  s.nu_x = 10.0;
  ReferenceState ref;  // straight reference through the origin
  RoadState road;
  road.phi = 0.05;
  const Disturbances d = disturbance_residual(s, 0.0, road, p, nom, ref);
  CHECK(d.d_lat == doctest::Approx(p.g * std::sin(0.05)).epsilon(1e-14));
  CHECK(d.d_lat == doctest::Approx(0.4903).epsilon(1e-3));
  CHECK(d.d_yaw == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("matched plant in the linear regime: only the reference feedforward remains") {
  // With true == nominal and slips small enough that the tire model is
  // effectively linear, the residual reduces to the known kinematic terms:
  //   d_lat = g sin(phi) - (nu - a24) psi_dot_des
  //   d_yaw = a44 psi_dot_des - psi_ddot_des
  VehicleParams p;
  const double nu = 10.0;
  const NominalCoefficients nom = nominal_coefficients(p, nu);

  PlantState s;
  s.nu_x = nu;
  s.y_dot = 2e-4;
  s.psi = 1e-4;
  s.psi_dot = 9.5e-3;
  ReferenceState ref;
  ref.psi_dot_des = 0.01;
  ref.psi_ddot_des = 0.002;
  RoadState road;
  road.phi = 0.03;
  const double delta = 5e-4;

  const Disturbances d = disturbance_residual(s, delta, road, p, nom, ref);
  const double want_lat = p.g * std::sin(road.phi) - (nu - nom.a24) * ref.psi_dot_des;
  const double want_yaw = nom.a44 * ref.psi_dot_des - ref.psi_ddot_des;
  CHECK(d.d_lat == doctest::Approx(want_lat).epsilon(1e-5));
  CHECK(d.d_yaw == doctest::Approx(want_yaw).epsilon(1e-5));
}

TEST_CASE("parameter mismatch produces a nonzero residual where the model claims none") {
  VehicleParams p;
  UncertaintySpec u;
  u.m_scale = 1.2;
  const VehicleParams truth = apply_uncertainty(p, u);
  const NominalCoefficients nom = nominal_coefficients(p, 10.0);

  PlantState s;
  s.nu_x = 10.0;
  s.y_dot = 0.3;  // real slip, so real forces divided by the wrong mass
  ReferenceState ref;
  const Disturbances with_mismatch = disturbance_residual(s, 0.0, RoadState{}, truth, nom, ref);
  const Disturbances matched = disturbance_residual(s, 0.0, RoadState{}, p, nom, ref);
  // at this slip the matched residual is pure tire nonlinearity; the heavier
  // plant divides the same forces by 20% more mass, which must show up
  CHECK(std::abs(with_mismatch.d_lat - matched.d_lat) > 0.1);
}
