#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "modsim/core/periods.hpp"
#include "modsim/crawl/observation.hpp"

namespace modsim::infer {

// A removal more than 30 hours after creation is called delayed.
constexpr core::DurationMin kDelayedThresholdMin = 30 * core::kMinutesPerHour;

struct RemovedPostRecord {
    std::uint64_t post_id = 0;
    std::uint64_t page_id = 0;
    core::SimTime created_at = 0;
    core::SimTime last_observed_at = 0;
    core::DurationMin lifetime_lb = 0; // last_observed_at - created_at
    core::EngagementCounts final_counts;
    core::PeriodName period = core::PeriodName::Baseline;
    bool delayed = false; // lifetime_lb > 30 h
    bool page_deletion = false;
};

struct RemovedSet {
    std::vector<RemovedPostRecord> records; // ordered by post_id
    // Indices into `records` per bucket; RemovedPages takes precedence over
    // the time-based buckets.
    std::map<core::PeriodName, std::vector<std::size_t>> partition;
    std::vector<std::string> warnings;
};

// Which timestamp assigns a removed post to a period. The last observation
// is the removal-time proxy; creation-time slicing is for publication-side
// tables.
enum class PeriodKey : int {
    LastObserved = 0,
    Created = 1,
};

struct InferOptions {
    PeriodKey period_key = PeriodKey::LastObserved;
    std::size_t min_page_deletion_posts = 5;
};

// A post is removed iff it is absent at follow-up. Posts never observed are
// unknowable and absent from the result; a follow-up-present post with no
// crawl observations produces a coverage-gap warning.
RemovedSet detect_removed(const crawl::ObservationLog& log, const core::PeriodSet& periods,
                          const InferOptions& options = {});

// A page is dropped wholesale when at least min_posts of its posts are
// removed, every known post of the page is removed, and all their last
// observations fall within one history interval of each other.
std::vector<std::uint64_t> detect_page_deletions(
    const std::vector<RemovedPostRecord>& records,
    const std::unordered_map<std::uint64_t, std::int64_t>& known_posts_per_page,
    std::size_t min_posts, core::DurationMin history_interval);

// True iff the page already had a removed post strictly before as_of.
bool repeat_offender(const RemovedSet& removed, std::uint64_t page_id, core::SimTime as_of);

// repeat_offender evaluated at each record's own last observation time.
std::vector<bool> repeat_offender_flags(const RemovedSet& removed);

} // namespace modsim::infer
