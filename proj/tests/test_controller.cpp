#include <cmath>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "latsim/controller.hpp"
#include "latsim/error_model.hpp"

using namespace latsim;

namespace {

// Row values of the error dynamics under a given steering angle. Written
// out locally so the cancellation checks do not reuse controller internals.
double lateral_row(const ErrorEstimates& e, double delta, const NominalCoefficients& n) {
  return n.a22 * e.z2 + n.a23 * e.z3 + n.a24 * e.z4 + n.b21 * delta + e.d_lat;
}

double yaw_row(const ErrorEstimates& e, double delta, const NominalCoefficients& n) {
  return n.a42 * e.z2 + n.a43 * e.z3 + n.a44 * e.z4 + n.b41 * delta + e.d_yaw;
}

ErrorEstimates random_estimates(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ErrorEstimates e;
  e.z1 = u(rng);
  e.z2 = u(rng);
  e.z3 = 0.3 * u(rng);
  e.z4 = u(rng);
  e.d_lat = 5.0 * u(rng);
  e.d_yaw = 5.0 * u(rng);
  return e;
}

}  // namespace

TEST_CASE("virtual control at the reference gains") {
  VehicleParams p;
  const NominalCoefficients nom = nominal_coefficients(p, 10.0);
  ControllerParams cp;  // eta1 = 2835000, eta2 = 31500, tau = 0.1

  ErrorEstimates e;
  e.z1 = 0.01;
  VirtualControl v = virtual_controls(e, nom, cp);
  CHECK(v.nu_h == doctest::Approx(-283.5).epsilon(1e-12));

  e.z2 = 0.002;
  v = virtual_controls(e, nom, cp);
  CHECK(v.nu_h == doctest::Approx(-283.5 - 6.3).epsilon(1e-12));
}

TEST_CASE("desired heading error solves the cancellation equality") {
  VehicleParams p;
  const NominalCoefficients nom = nominal_coefficients(p, 12.0);
  ControllerParams cp;
  const double r = nom.b_ratio();
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const ErrorEstimates e = random_estimates(rng);
    const VirtualControl v = virtual_controls(e, nom, cp);
    const double bracket = -nom.alpha2 * e.z2 - nom.alpha3 * v.z3_des - nom.alpha4 * e.z4 +
                           r * e.d_lat - e.d_yaw;
    const double scale = std::max(1.0, std::abs(r * v.nu_h));
    CHECK(std::abs(bracket - r * v.nu_h) <= 1e-9 * scale);
  }
}

TEST_CASE("auxiliary control tracks the desired heading error") {
  VehicleParams p;
  const NominalCoefficients nom = nominal_coefficients(p, 10.0);
  ControllerParams cp;  // k3 = 350000, k4 = 250000

  ErrorEstimates e;
  e.z3 = 1e-5;
  AuxiliaryControl a = auxiliary_controls(e, 0.0, nom, cp);
  CHECK(a.u_d == doctest::Approx(-3.5).epsilon(1e-12));

  e.z4 = 2e-6;
  a = auxiliary_controls(e, 0.0, nom, cp);
  CHECK(a.u_d == doctest::Approx(-3.5 - 0.5).epsilon(1e-12));
}

TEST_CASE("full law cancels both error rows exactly") {
  // Feeding the law its own model coefficients and the true disturbances
  // must leave the lateral row equal to u and the yaw row equal to u_d.
  VehicleParams p;
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> speed(3.0, 30.0);
  ControllerParams cp;
  cp.delta_max = 1e9;  // keep delta_raw applied so the identity is unclipped
  for (int i = 0; i < 200; ++i) {
    const NominalCoefficients nom = nominal_coefficients(p, speed(rng));
    const ErrorEstimates e = random_estimates(rng);
    const SteeringCommand c = steering_command(e, nom, cp);

    const double lat = lateral_row(e, c.delta_raw, nom);
    const double yaw = yaw_row(e, c.delta_raw, nom);
    const double lat_scale = std::max(1.0, std::abs(c.u));
    const double yaw_scale = std::max(1.0, std::abs(c.u_d));
    CHECK(std::abs(lat - c.u) <= 1e-9 * lat_scale);
    CHECK(std::abs(yaw - c.u_d) <= 1e-9 * yaw_scale);
  }
}

TEST_CASE("reduced law drives the offset row with the virtual input") {
  VehicleParams p;
  const NominalCoefficients nom = nominal_coefficients(p, 10.0);
  ControllerParams cp;
  cp.tau = 1.0;
  cp.eta1 = 4.0;
  cp.eta2 = 4.0;
  cp.delta_max = 1e9;
  std::mt19937_64 rng(31);
  for (int i = 0; i < 100; ++i) {
    const ErrorEstimates e = random_estimates(rng);
    const SteeringCommand c = reduced_steering_command(e, nom, cp);
    CHECK(c.nu_h == doctest::Approx(-4.0 * e.z1 - 4.0 * e.z2).epsilon(1e-12));
    const double lat = lateral_row(e, c.delta_raw, nom);
    CHECK(std::abs(lat - c.nu_h) <= 1e-9 * std::max(1.0, std::abs(c.nu_h)));
    CHECK(c.u == doctest::Approx(c.nu_h).epsilon(1e-15));
  }
}

TEST_CASE("steering saturation") {
  CHECK(clamp_steering(0.2, 0.5) == 0.2);
  CHECK(clamp_steering(0.7, 0.5) == 0.5);
  CHECK(clamp_steering(-0.7, 0.5) == -0.5);
  CHECK(clamp_steering(clamp_steering(9.0, 0.5), 0.5) == 0.5);

  VehicleParams p;
  const NominalCoefficients nom = nominal_coefficients(p, 10.0);
  ControllerParams cp;  // delta_max = 2.7*pi

  ErrorEstimates e;
  e.z1 = 10.0;  // reference gains turn this into an enormous command
  const SteeringCommand c = steering_command(e, nom, cp);
  CHECK(c.saturated);
  CHECK(std::abs(c.delta) == doctest::Approx(2.7 * 3.14159265358979323846).epsilon(1e-15));
  CHECK(std::abs(c.delta_raw) > std::abs(c.delta));

  ErrorEstimates mirror = e;
  mirror.z1 = -e.z1;
  const SteeringCommand cm = steering_command(mirror, nom, cp);
  CHECK(cm.delta == doctest::Approx(-c.delta).epsilon(1e-15));
  CHECK(cm.delta_raw == doctest::Approx(-c.delta_raw).epsilon(1e-12));
}

TEST_CASE("zero state commands zero steering") {
  VehicleParams p;
  const NominalCoefficients nom = nominal_coefficients(p, 10.0);
  ControllerParams cp;
  const SteeringCommand c = steering_command(ErrorEstimates{}, nom, cp);
  CHECK(c.nu_h == 0.0);
  CHECK(c.z3_des == 0.0);
  CHECK(c.u_d == 0.0);
  CHECK(c.u == 0.0);
  CHECK(c.delta_raw == 0.0);
  CHECK(c.delta == 0.0);
  CHECK_FALSE(c.saturated);
}

TEST_CASE("degenerate heading authority is rejected") {
  VehicleParams p;
  NominalCoefficients nom = nominal_coefficients(p, 10.0);
  nom.alpha3 = 0.0;
  ControllerParams cp;
  ErrorEstimates e;
  e.z1 = 0.1;
  CHECK_THROWS_AS(virtual_controls(e, nom, cp), std::domain_error);
}

TEST_CASE("controller parameter validation") {
  ControllerParams cp;
  CHECK_NOTHROW(cp.validate());

  ControllerParams bad = cp;
  bad.eta1 = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cp;
  bad.eta2 = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cp;
  bad.tau = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cp;
  bad.tau = 1.2;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cp;
  bad.k3 = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cp;
  bad.k4 = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cp;
  bad.delta_max = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
