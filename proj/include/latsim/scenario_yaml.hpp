#pragma once

#include <stdexcept>
#include <string>

#include "latsim/scenario.hpp"

namespace latsim {

/// Scenario file problem, carrying file/field context in what().
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Loads and validates a scenario from a YAML file. Unknown keys are
/// rejected; missing keys fall back to defaults. Throws ScenarioError with
/// file and field context, or std::invalid_argument from validation.
Scenario load_scenario(const std::string& path);

/// Parses a scenario from YAML text (context string used in errors).
Scenario parse_scenario(const std::string& text, const std::string& context);

/// Serializes the fully resolved scenario; load(echo(s)) == s field for field.
std::string scenario_to_yaml(const Scenario& sc);

/// Writes scenario_to_yaml to a file. Throws ScenarioError on I/O failure.
void save_scenario(const Scenario& sc, const std::string& path);

}  // namespace latsim
