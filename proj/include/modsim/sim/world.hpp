#pragma once

#include <optional>
#include <string>
#include <vector>

#include "modsim/core/step_grid.hpp"
#include "modsim/core/types.hpp"

namespace modsim::sim {

using core::DurationMin;
using core::EngagementCounts;
using core::PageProfile;
using core::SimTime;

// Saturating engagement curve of one post. Cumulative engagement at age t
// follows total_potential * F(t) with the log-logistic CDF
// F(t) = 1 / (1 + (t/tau)^-shape_k), floored to an integer and clamped to
// total_potential at and beyond the long-run horizon.
struct AccrualCurve {
    std::int64_t total_potential = 0;
    double tau = 1.0;     // minutes to half of the potential
    double shape_k = 2.0; // steepness
};

std::int64_t cumulative_at(const AccrualCurve& curve, DurationMin age,
                           DurationMin horizon = core::kLongRunHorizonMin);

// Deterministic split of a cumulative engagement value into
// reactions/shares/comments. For a fixed split_seed the split is exactly
// conserving and each component is non-decreasing in the input value;
// across seeds the expected proportions are 0.75 / 0.15 / 0.10.
EngagementCounts split_counts(std::int64_t value, std::uint64_t split_seed);

enum class RemovalCause : int {
    Moderation = 0,
    Voluntary = 1,
    PageDeletion = 2,
};

std::string to_string(RemovalCause c);
RemovalCause removal_cause_from_string(const std::string& s);

struct RemovalEvent {
    SimTime at = 0;
    RemovalCause cause = RemovalCause::Moderation;
};

struct PostRecord {
    std::uint64_t post_id = 0;
    std::uint64_t page_id = 0;
    SimTime created_at = 0;
    AccrualCurve curve;
    std::uint64_t split_seed = 0;
    std::optional<RemovalEvent> removal;

    bool exists_at(SimTime t) const {
        return t >= created_at && (!removal || t < removal->at);
    }
};

enum class ScenarioMode : int {
    Baseline = 0,
    Crisis = 1,
    RetroactiveWave = 2,
};

std::string to_string(ScenarioMode m);
ScenarioMode scenario_mode_from_string(const std::string& s);

// Lognormal(log median, log sigma) truncated to [lo, hi] minutes.
struct TruncatedLogNormal {
    double median_min = 0.0;
    double log_sigma = 0.0;
    double lo_min = 0.0;
    double hi_min = 0.0;
};

struct ScenarioConfig {
    std::uint64_t seed = 1;
    ScenarioMode mode = ScenarioMode::Baseline;

    // Publication window; posts are created in [window_start, window_end).
    SimTime window_start = 0;
    SimTime window_end = core::days(33);

    std::size_t n_pages = 450;

    // Page profiles.
    double posts_per_day_mean = 16.0;
    double posts_per_day_log_sigma = 0.8;
    double audience_log_sigma = 0.4; // audience_scale is unit-mean lognormal
    // Partisanship bucket weights, FarLeft..FarRight.
    double partisan_weights[5] = {0.10, 0.22, 0.30, 0.22, 0.16};
    // Probability a page is a misinformation page, per bucket.
    double misinfo_prob[5] = {0.10, 0.08, 0.06, 0.22, 0.35};

    // Long-run engagement potential: two-component lognormal mixture, scaled
    // by the page audience. The heavy component models would-be viral posts.
    double body_log_mean = 5.78;
    double body_log_sigma = 1.2;
    double viral_log_mean = 9.60;
    double viral_log_sigma = 1.0;
    double viral_mix_prob = 0.011;
    double engagement_scale = 1.0; // applied in Crisis mode from policy_change_at

    // Accrual speed.
    double tau_median_min = 368.0;
    double tau_log_sigma = 0.75;
    double tau_median_viral_min = 690.0;
    double tau_log_sigma_viral = 0.60;
    double shape_k = 2.0;

    // Moderation removals. The base rate is normalized so the population
    // removal fraction stays at removal_fraction even though misinformation
    // pages are targeted misinfo_removal_multiplier times more often.
    double removal_fraction = 0.0028;
    double viral_removal_multiplier = 2.0;
    double misinfo_removal_multiplier = 3.0;

    // Takedown delay mixture: a small quick component (removed within hours,
    // typically before a daily crawl ever sees the post), the dominant fast
    // component, and a slow tail.
    double delay_quick_weight = 0.03;
    double delay_quick_median_min = 180.0;
    double delay_quick_log_sigma = 1.0;
    TruncatedLogNormal delay_fast{1962.0, 0.10, 1764.0, 2124.0};
    TruncatedLogNormal delay_fast_viral{1950.0, 0.10, 1860.0, 2040.0};
    double delay_slow_weight = 0.006;
    double delay_slow_median_min = 7200.0;
    double delay_slow_log_sigma = 1.0;

    // Author-initiated deletions.
    double voluntary_fraction = 0.000025;
    double voluntary_median_min = 3456.0; // mean 7.3 days at this sigma
    double voluntary_log_sigma = 1.49;

    // RetroactiveWave: starting at policy_change_at, posts published in the
    // preceding retro_window on flagged pages are taken down no earlier than
    // retro_min_age after creation. Flagged pages are drawn from pages that
    // already had a moderation takedown before the policy change.
    SimTime policy_change_at = core::days(29);
    DurationMin retro_window = core::days(8);
    double retro_page_fraction = 0.6;
    double retro_post_fraction = 0.5;
    double retro_partisan_bias[5] = {0.2, 0.5, 0.5, 1.5, 2.5};
    double retro_jitter_median_min = 720.0;
    double retro_jitter_log_sigma = 0.8;
    DurationMin retro_jitter_max = core::days(2);
    DurationMin retro_min_age = core::days(7);

    // Whole-page deletions: the first page_deletion_count pages (chosen by a
    // seeded draw) disappear at page_deletion_at with every post removed at
    // that one timestamp. Such pages receive no other removals and stop
    // publishing at the deletion time.
    std::size_t page_deletion_count = 0;
    SimTime page_deletion_at = core::days(30);

    DurationMin window_days() const {
        return (window_end - window_start) / core::kMinutesPerDay;
    }
};

struct World {
    ScenarioConfig config;
    std::vector<PageProfile> pages;
    std::vector<PostRecord> posts; // sorted by created_at
};

} // namespace modsim::sim
