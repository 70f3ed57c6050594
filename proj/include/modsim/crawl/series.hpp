#pragma once

#include <cstdint>
#include <vector>

#include "modsim/core/step_grid.hpp"
#include "modsim/crawl/observation.hpp"
#include "modsim/sim/world.hpp"

namespace modsim::crawl {

// Step-aligned cumulative engagement for one post that survived to follow-up.
struct AlignedSeries {
    std::uint64_t post_id = 0;
    std::uint64_t page_id = 0;
    core::SimTime created_at = 0;
    // One value per grid offset: the last observed total at age <= offset
    // (0 before the first observation). The final step is the follow-up
    // total, i.e. the long-run engagement.
    std::vector<std::int64_t> totals;
};

// Series for every post present at follow-up, ordered by post_id.
std::vector<AlignedSeries> survivor_series(const ObservationLog& log, const core::StepGrid& grid);

// Single-post variants. The log overload reads observations only; the world
// overload samples the ground-truth curve at each offset. Both throw
// std::runtime_error for unknown posts and for posts that did not survive
// (their history is not retrievable, only pre-removal snapshots are).
std::vector<std::int64_t> extract_time_series(const ObservationLog& log, std::uint64_t post_id,
                                              const core::StepGrid& grid);
std::vector<std::int64_t> extract_time_series(const sim::World& world, std::uint64_t post_id,
                                              const core::StepGrid& grid);

} // namespace modsim::crawl
