#pragma once

#include <cstdint>

#include "modsim/core/types.hpp"

namespace modsim::crawl {

// Three observation processes share this schedule: a discovery crawl that
// registers new posts, a history crawl that refreshes engagement of known
// posts under a per-tick visit budget, and one follow-up pass that checks
// final presence long after the publication window.
struct CrawlSchedule {
    core::DurationMin discovery_interval = core::kMinutesPerDay;
    core::DurationMin history_interval = core::kMinutesPerDay;
    // Snapshot records per history tick, spent newest-first. The default
    // covers a two-week-plus backlog at the default publication volume.
    std::int64_t history_budget = 120000;
    core::SimTime followup_at = 345600;
    core::DurationMin start_offset = 0;
    // Last tick time; -1 resolves to window_end + 3 days.
    core::SimTime crawl_until = -1;
};

CrawlSchedule daily_schedule();
CrawlSchedule hourly_schedule();

core::SimTime resolve_crawl_until(const CrawlSchedule& s, core::SimTime window_end);

// Throws std::invalid_argument on non-positive intervals or budget, or a
// follow-up time that does not fall after both the window and the last tick.
void validate_schedule(const CrawlSchedule& s, core::SimTime window_end);

} // namespace modsim::crawl
