#pragma once

#include <string>

#include "avgps/sim.hpp"

namespace avgps {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Scenario <-> JSON config text. Every tunable default is a key; omitted
// keys keep their defaults, unknown keys are rejected with their path.
std::string scenario_to_json(const Scenario& sc);
Scenario scenario_from_json(const std::string& text);
Scenario load_scenario(const std::string& path);

// The built-in defaults, including a seven-waypoint circular mission.
Scenario default_scenario();

}  // namespace avgps
