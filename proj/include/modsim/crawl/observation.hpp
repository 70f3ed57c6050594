#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "modsim/core/types.hpp"
#include "modsim/crawl/schedule.hpp"

namespace modsim::crawl {

enum class CrawlKind : int {
    Discovery = 0,
    History = 1,
    Followup = 2,
};

std::string to_string(CrawlKind k);
CrawlKind crawl_kind_from_string(const std::string& s);

struct Observation {
    std::uint64_t post_id = 0;
    std::uint64_t page_id = 0;
    CrawlKind kind = CrawlKind::Discovery;
    core::SimTime observed_at = 0;
    core::EngagementCounts counts;
};

// Publication metadata captured when a post is first discovered.
struct PostMeta {
    std::uint64_t page_id = 0;
    core::SimTime created_at = 0;
};

struct FollowupRecord {
    bool present = false;
    core::EngagementCounts counts; // zero when absent
};

// Everything the analysis pipeline is allowed to see. No ground truth:
// downstream stages must work from these records alone.
struct ObservationLog {
    CrawlSchedule schedule; // crawl_until resolved to a concrete time
    core::SimTime window_start = 0;
    core::SimTime window_end = 0;
    std::vector<Observation> observations; // ordered by (observed_at, post_id)
    std::unordered_map<std::uint64_t, PostMeta> post_meta;
    std::unordered_map<std::uint64_t, FollowupRecord> followup;
    std::int64_t total_visits = 0; // cost proxy, includes checks of gone posts
};

} // namespace modsim::crawl
