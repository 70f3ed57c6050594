#pragma once

#include "modsim/crawl/observation.hpp"
#include "modsim/sim/world.hpp"

namespace modsim::crawl {

// Runs discovery, history and follow-up crawls against a ground-truth world.
// Discovery at each tick registers posts created at or before the tick that
// are still up; a post created and removed entirely between ticks is never
// seen. History visits known posts newest-first, spending budget only on
// posts that still exist; a gone post costs a visit but yields no record.
// Deterministic given world and schedule.
ObservationLog run_crawls(const sim::World& world, const CrawlSchedule& schedule);

} // namespace modsim::crawl
