#pragma once

#include <string>

#include "modsim/sim/world.hpp"

namespace modsim::sim {

std::string scenario_to_json(const ScenarioConfig& cfg);
ScenarioConfig scenario_from_json(const std::string& text);

// Persists a world under `dir` as world_meta.json (config), pages.csv and
// posts.ndjson. load_world restores it exactly: every field round-trips,
// including removal events and double-valued curve parameters.
void save_world(const World& world, const std::string& dir);
World load_world(const std::string& dir);

} // namespace modsim::sim
