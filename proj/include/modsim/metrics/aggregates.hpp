#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "modsim/core/periods.hpp"
#include "modsim/core/step_grid.hpp"
#include "modsim/core/types.hpp"
#include "modsim/crawl/observation.hpp"
#include "modsim/infer/removed.hpp"

namespace modsim::metrics {

// Final observed engagement of one known post: the last pre-removal total
// for removed posts, the follow-up total for survivors.
struct PostEngagementView {
    std::uint64_t post_id = 0;
    std::uint64_t page_id = 0;
    core::SimTime created_at = 0;
    std::int64_t engagement = 0;
    bool removed = false;
    std::ptrdiff_t removed_index = -1; // into RemovedSet.records, -1 otherwise
};

// One view per post with a follow-up verdict, ordered by post_id. Posts in
// `removed` and follow-up survivors are covered; never-observed posts are
// not representable and absent.
std::vector<PostEngagementView> engagement_views(const crawl::ObservationLog& log,
                                                 const infer::RemovedSet& removed);

// Smallest grid offset whose value reaches fraction * final value. Empty
// when the final value is not positive (the post never drew engagement).
std::optional<core::DurationMin> time_to_fraction(const std::vector<std::int64_t>& totals,
                                                  const core::StepGrid& grid,
                                                  double fraction = 0.8);

// Engagement-weighted removal rate over one category of posts: removed
// engagement divided by all engagement, 0 when the category drew none.
double weighted_removal_rate(const std::vector<PostEngagementView>& category);

struct RemovalRateCell {
    core::Partisanship partisanship = core::Partisanship::Center;
    bool misinformation = false;
    std::int64_t removed_engagement = 0;
    std::int64_t total_engagement = 0;
    std::int64_t removed_posts = 0;
    std::int64_t total_posts = 0;
    double rate = 0.0;
};

// Rates per (partisanship, misinformation) page label; all ten cells are
// emitted in enum order even when empty.
std::vector<RemovalRateCell> removal_rates_by_category(
    const std::vector<PostEngagementView>& views, const std::vector<core::PageProfile>& pages);

struct ShareRow {
    core::PeriodName period = core::PeriodName::Baseline;
    bool removed = false;
    std::array<std::int64_t, core::kPartisanshipBuckets> engagement{};
    std::array<double, core::kPartisanshipBuckets> share{}; // sums to 1
};

// Engagement shares over the five partisanship buckets, one row per
// (period, removed status) with any engagement. Removed posts take the
// period of their removal record (page-deletion bucket included); survivors
// take the period of their creation time.
std::vector<ShareRow> engagement_share_breakdown(const std::vector<PostEngagementView>& views,
                                                 const infer::RemovedSet& removed,
                                                 const std::vector<core::PageProfile>& pages,
                                                 const core::PeriodSet& periods);

struct PageImpact {
    std::uint64_t page_id = 0;
    std::int64_t removed_engagement = 0;
    std::int64_t total_engagement = 0;
    std::int64_t removed_posts = 0;
    double removed_share = 0.0; // of the page's total engagement
};

// Pages with at least one removal, sorted by removed engagement descending
// (ties by page_id).
std::vector<PageImpact> top_impacted_pages(const std::vector<PostEngagementView>& views);

struct SummaryRow {
    std::string label;
    std::int64_t posts = 0;
    std::int64_t engagement = 0;
    std::int64_t delayed_posts = 0;      // removals with lifetime_lb > 30 h
    std::int64_t delayed_engagement = 0; // their observed engagement
};

// Dataset overview: full set, removed set, the removed partition buckets,
// posts of publishers with at least one removal, and the non-removed rest.
std::vector<SummaryRow> dataset_summary(const std::vector<PostEngagementView>& views,
                                        const infer::RemovedSet& removed);

// Events per full day bucket within [start, end); a trailing partial day is
// dropped, events outside the span are ignored.
std::vector<double> daily_counts(const std::vector<core::SimTime>& times, core::SimTime start,
                                 core::SimTime end);

struct CdfPoint {
    double day = 0.0;
    double fraction = 0.0;
};

// Empirical CDF of lifetimes on a regular day grid. The grid is extended
// past max_day when needed so the curve always ends at 1.
std::vector<CdfPoint> lifetime_cdf(const std::vector<core::DurationMin>& lifetimes,
                                   double max_day = 30.0, double step_day = 0.25);

} // namespace modsim::metrics
