#pragma once

#include "modsim/sim/world.hpp"

namespace modsim::sim {

// Builds the ground-truth world for a scenario. Single-threaded; every page
// and post draws from its own seeded substream, so the result depends only on
// the config.
//
// Throws std::invalid_argument on inconsistent configs (empty window, zero
// pages, out-of-window policy change, weights that do not form a mixture).
World generate_world(const ScenarioConfig& cfg);

void validate_config(const ScenarioConfig& cfg);

} // namespace modsim::sim
