#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "modsim/core/periods.hpp"
#include "modsim/core/step_grid.hpp"
#include "modsim/crawl/ingest.hpp"
#include "modsim/crawl/observation.hpp"
#include "modsim/crawl/series.hpp"
#include "modsim/infer/removed.hpp"
#include "modsim/metrics/aggregates.hpp"
#include "modsim/metrics/estimator.hpp"
#include "modsim/metrics/prevention.hpp"
#include "modsim/metrics/stats.hpp"
#include "modsim/metrics/virality.hpp"
#include "modsim/sim/world.hpp"
#include "modsim/validation/validate.hpp"

namespace modsim::pipeline {

struct RunConfig {
    sim::ScenarioConfig scenario;
    crawl::CrawlSchedule schedule;
    std::string output_dir = "out";
    std::string format = "csv"; // csv | json, applies to tabular reports
    std::size_t validation_samples = 10000;
    int min_viral_support = 10;
    std::size_t min_page_deletion_posts = 5;
    bool period_by_created = false;
};

std::string run_config_to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const std::string& text);
RunConfig load_run_config(const std::string& path);

// The three time buckets over an observed span, with the default 21/29-day
// boundaries compressed proportionally when the span is shorter.
core::PeriodSet periods_for_span(core::SimTime window_start, core::SimTime horizon);

// Analysis periods for a run: the three time buckets over the observed span.
core::PeriodSet analysis_periods(const RunConfig& cfg);

// Roll-up of prevented engagement over a set of removed posts.
struct PreventionSummary {
    std::int64_t posts = 0;
    std::int64_t observed = 0;
    double prevented = 0.0;
    double potential = 0.0;
    double aggregate_rate = 0.0; // sum prevented / sum potential
    double mean_post_rate = 0.0; // mean of per-post rates
};

// Everything the analysis derives from one observation log. All fields are
// deterministic functions of (log, pages, config).
struct AnalysisBundle {
    std::uint64_t seed = 0;
    core::StepGrid grid;
    core::PeriodSet periods;

    infer::RemovedSet removed;
    std::vector<metrics::PostEngagementView> views;
    std::int64_t survivor_count = 0;
    metrics::ViralityThreshold threshold;

    // Series of posts created in the baseline period that survived to
    // follow-up; estimator input and validation population.
    std::vector<crawl::AlignedSeries> baseline_series;
    metrics::EstimatorIndex estimators;
    bool estimators_built = false;

    std::vector<metrics::PreventionResult> prevention; // aligned with removed.records
    PreventionSummary prevention_overall;
    std::map<core::PeriodName, PreventionSummary> prevention_by_period;
    PreventionSummary prevention_delayed;

    validation::ValidationReport validation;
    bool validation_ran = false;

    struct WelchEntry {
        std::string label;
        bool ok = false;
        std::string note;
        metrics::TTestResult result;
    };
    struct MedianEntry {
        std::string label;
        bool viral = false;
        bool ok = false;
        std::string note;
        metrics::MedianTestResult result;
    };
    std::vector<WelchEntry> welch_tests;   // daily removal counts vs baseline
    std::vector<MedianEntry> median_tests; // lifetime lower bounds vs baseline

    std::vector<metrics::RemovalRateCell> removal_rates;
    std::vector<metrics::ShareRow> shares;
    std::vector<metrics::SummaryRow> table1;
    std::vector<metrics::PageImpact> top_impacted;
    std::vector<std::pair<core::PeriodName, std::vector<metrics::CdfPoint>>> lifetime_cdfs;
    std::vector<core::DurationMin> t80_non_viral; // time to 80 % of final value,
    std::vector<core::DurationMin> t80_viral;     // baseline survivors

    std::int64_t delayed_removals = 0;
    std::int64_t delayed_from_repeat_offenders = 0;

    std::vector<std::string> warnings;
};

AnalysisBundle analyze(const crawl::ObservationLog& log,
                       const std::vector<core::PageProfile>& pages, const RunConfig& cfg);

// Pipeline stages. Disk-writing stages persist their artifacts under
// cfg.output_dir so each stage can be re-run from the previous one's files.
sim::World stage_gen(const RunConfig& cfg, bool write);
crawl::ObservationLog stage_crawl(const RunConfig& cfg, const sim::World& world, bool write);
crawl::IngestResult stage_ingest(const RunConfig& cfg, const std::string& observations_path,
                                 const std::string& followup_path,
                                 const std::string& pages_path);
// Re-reads the crawl artifacts from cfg.output_dir and analyzes them.
AnalysisBundle stage_analyze_from_disk(const RunConfig& cfg);

// gen -> crawl -> analyze -> all reports. Returns 0 on success.
int run_all(const RunConfig& cfg);

struct ScheduleComparisonRow {
    std::string label;
    crawl::CrawlSchedule schedule;
    std::int64_t missed_removals = 0;   // true removals with no observation at all
    std::int64_t observed_removals = 0; // inferred removed posts
    double mean_slack_min = 0.0;        // true delay minus lifetime lower bound
    std::int64_t total_visits = 0;
};

// Crawls one world under each schedule and scores the inferred removal set
// against ground truth. Slack is averaged over inferred removals whose true
// removal happened by the last crawl tick.
std::vector<ScheduleComparisonRow> compare_schedules(
    const sim::World& world,
    const std::vector<std::pair<std::string, crawl::CrawlSchedule>>& schedules);

void write_schedule_comparison_csv(const std::vector<ScheduleComparisonRow>& rows,
                                   const std::string& path, std::uint64_t seed);

} // namespace modsim::pipeline
