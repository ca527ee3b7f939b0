#include "latsim/scenario.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace latsim {

std::string to_string(ControlMode m) {
  switch (m) {
    case ControlMode::kEhgo: return "ehgo";
    case ControlMode::kExactFeedback: return "exact_feedback";
    case ControlMode::kReducedLateral: return "reduced_lateral";
  }
  throw std::logic_error("unhandled ControlMode");
}

ControlMode control_mode_from_string(const std::string& s) {
  if (s == "ehgo") return ControlMode::kEhgo;
  if (s == "exact_feedback") return ControlMode::kExactFeedback;
  if (s == "reduced_lateral") return ControlMode::kReducedLateral;
  throw std::invalid_argument("unknown control mode '" + s +
                              "' (expected ehgo, exact_feedback, or reduced_lateral)");
}

namespace {

// Collects sub-object validation exceptions into the flat error list.
template <typename V>
void collect(std::vector<std::string>& errors, const char* what, V&& check) {
  try {
    check();
  } catch (const std::exception& ex) {
    errors.push_back(std::string(what) + ": " + ex.what());
  }
}

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::vector<std::string> Scenario::validation_errors() const {
  std::vector<std::string> errors;
  collect(errors, "vehicle", [&] { vehicle.validate(); });
  collect(errors, "uncertainty", [&] { uncertainty.validate(); });
  collect(errors, "controller", [&] { controller.validate(); });
  collect(errors, "observer", [&] { observer.validate(); });

  if (!(nu_x >= kMinLongitudinalSpeed))
    errors.push_back("nu_x = " + num(nu_x) + " is below nu_min = " + num(kMinLongitudinalSpeed));
  if (!(sim.dt > 0.0))
    errors.push_back("sim.dt = " + num(sim.dt) + " must be positive");
  if (sim.dt > 0.05)
    errors.push_back("sim.dt = " + num(sim.dt) + " exceeds the 0.05 s step ceiling");
  if (!(sim.horizon > 0.0))
    errors.push_back("sim.horizon = " + num(sim.horizon) + " must be positive");
  if (sim.log_stride < 1)
    errors.push_back("sim.log_stride = " + std::to_string(sim.log_stride) + " must be >= 1");
  if (sim.control_rate_hz < 0.0)
    errors.push_back("sim.control_rate_hz = " + num(sim.control_rate_hz) +
                     " must be non-negative");
  if (mode == ControlMode::kEhgo && sim.dt > 0.0 && sim.dt > observer.epsilon / 5.0)
    errors.push_back("sim.dt = " + num(sim.dt) + " exceeds epsilon/5 = " +
                     num(observer.epsilon / 5.0) + "; the step cannot resolve the observer");
  if (!(beta_x > -1.0))
    errors.push_back("beta_x = " + num(beta_x) + " must exceed -1");
  if (noise.std_z1 < 0.0 || noise.std_z3 < 0.0)
    errors.push_back("noise standard deviations must be non-negative");

  const double bank_max = banking.max_abs();
  if (bank_max >= 3.14159265358979323846 / 2.0)
    errors.push_back("banking reaches " + num(bank_max) + " rad; |phi| must stay below pi/2");

  const double ay_max = curvature.max_abs() * nu_x * nu_x;
  if (ay_max > comfort_accel_max)
    errors.push_back("curvature demands " + num(ay_max) + " m/s^2 lateral acceleration, above the " +
                     num(comfort_accel_max) + " m/s^2 comfort bound");

  return errors;
}

void Scenario::validate() const {
  const auto errors = validation_errors();
  if (errors.empty()) return;
  std::string joined = "scenario '" + name + "' invalid:";
  for (const auto& e : errors) joined += "\n  - " + e;
  throw std::invalid_argument(joined);
}

}  // namespace latsim
