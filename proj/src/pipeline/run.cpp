#include "modsim/pipeline/run.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "modsim/core/csv.hpp"
#include "modsim/core/rng.hpp"
#include "modsim/crawl/log_io.hpp"
#include "modsim/crawl/simulate.hpp"
#include "modsim/report/reports.hpp"
#include "modsim/sim/generator.hpp"
#include "modsim/sim/world_io.hpp"

namespace modsim::pipeline {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr std::uint64_t kValidationSeedSalt = 0xE5;

json schedule_to_json(const crawl::CrawlSchedule& s) {
    return json{{"discovery_interval_min", s.discovery_interval},
                {"history_interval_min", s.history_interval},
                {"history_budget", s.history_budget},
                {"followup_at_min", s.followup_at},
                {"start_offset_min", s.start_offset},
                {"crawl_until_min", s.crawl_until}};
}

crawl::CrawlSchedule schedule_from_json(const json& j) {
    crawl::CrawlSchedule s;
    s.discovery_interval = j.value("discovery_interval_min", s.discovery_interval);
    s.history_interval = j.value("history_interval_min", s.history_interval);
    s.history_budget = j.value("history_budget", s.history_budget);
    s.followup_at = j.value("followup_at_min", s.followup_at);
    s.start_offset = j.value("start_offset_min", s.start_offset);
    s.crawl_until = j.value("crawl_until_min", s.crawl_until);
    return s;
}

PreventionSummary summarize_prevention(const std::vector<metrics::PreventionResult>& results,
                                       const std::vector<std::size_t>* subset) {
    PreventionSummary s;
    auto add = [&](const metrics::PreventionResult& r) {
        ++s.posts;
        s.observed += r.observed;
        s.prevented += r.prevented;
        s.potential += r.potential;
        s.mean_post_rate += r.prevention_rate;
    };
    if (subset) {
        for (std::size_t i : *subset)
            if (i < results.size()) add(results[i]);
    } else {
        for (const auto& r : results) add(r);
    }
    if (s.posts > 0) s.mean_post_rate /= static_cast<double>(s.posts);
    if (s.potential > 0.0) s.aggregate_rate = s.prevented / s.potential;
    return s;
}

std::vector<core::SimTime> bucket_last_observed(const infer::RemovedSet& removed,
                                                core::PeriodName period) {
    std::vector<core::SimTime> out;
    auto it = removed.partition.find(period);
    if (it == removed.partition.end()) return out;
    out.reserve(it->second.size());
    for (std::size_t i : it->second) out.push_back(removed.records[i].last_observed_at);
    return out;
}

} // namespace

core::PeriodSet periods_for_span(core::SimTime window_start, core::SimTime horizon) {
    if (horizon - window_start < 3)
        throw std::invalid_argument("observation span too short to slice into periods");
    core::SimTime b1 = window_start + core::days(21);
    core::SimTime b2 = window_start + core::days(29);
    if (b2 + 1 > horizon) {
        // Short span: keep the default 21/29-of-33 proportions.
        const core::SimTime span = horizon - window_start;
        b1 = window_start + span * 21 / 33;
        b2 = window_start + span * 29 / 33;
        if (b1 <= window_start) b1 = window_start + 1;
        if (b2 <= b1) b2 = b1 + 1;
    }
    core::PeriodSet set;
    set.periods = {{core::PeriodName::Baseline, window_start, b1},
                   {core::PeriodName::Jan6, b1, b2},
                   {core::PeriodName::Jan12, b2, horizon}};
    set.validate();
    return set;
}

core::PeriodSet analysis_periods(const RunConfig& cfg) {
    const core::SimTime until =
        crawl::resolve_crawl_until(cfg.schedule, cfg.scenario.window_end);
    return periods_for_span(cfg.scenario.window_start, until + 1);
}

std::string run_config_to_json(const RunConfig& cfg) {
    json j;
    j["scenario"] = json::parse(sim::scenario_to_json(cfg.scenario));
    j["schedule"] = schedule_to_json(cfg.schedule);
    j["output_dir"] = cfg.output_dir;
    j["format"] = cfg.format;
    j["validation_samples"] = cfg.validation_samples;
    j["min_viral_support"] = cfg.min_viral_support;
    j["min_page_deletion_posts"] = cfg.min_page_deletion_posts;
    j["period_by_created"] = cfg.period_by_created;
    return j.dump(2) + "\n";
}

RunConfig run_config_from_json(const std::string& text) {
    json j = json::parse(text);
    RunConfig cfg;
    if (j.contains("scenario")) cfg.scenario = sim::scenario_from_json(j.at("scenario").dump());
    if (j.contains("schedule")) cfg.schedule = schedule_from_json(j.at("schedule"));
    cfg.output_dir = j.value("output_dir", cfg.output_dir);
    cfg.format = j.value("format", cfg.format);
    cfg.validation_samples = j.value("validation_samples", cfg.validation_samples);
    cfg.min_viral_support = j.value("min_viral_support", cfg.min_viral_support);
    cfg.min_page_deletion_posts =
        j.value("min_page_deletion_posts", cfg.min_page_deletion_posts);
    cfg.period_by_created = j.value("period_by_created", cfg.period_by_created);
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return run_config_from_json(buf.str());
}

AnalysisBundle analyze(const crawl::ObservationLog& log,
                       const std::vector<core::PageProfile>& pages, const RunConfig& cfg) {
    AnalysisBundle b;
    b.seed = cfg.scenario.seed;
    b.grid = core::default_step_grid();
    b.periods = periods_for_span(log.window_start, log.schedule.crawl_until + 1);

    infer::InferOptions opts;
    opts.period_key = cfg.period_by_created ? infer::PeriodKey::Created
                                            : infer::PeriodKey::LastObserved;
    opts.min_page_deletion_posts = cfg.min_page_deletion_posts;
    b.removed = infer::detect_removed(log, b.periods, opts);
    b.views = metrics::engagement_views(log, b.removed);

    std::vector<std::int64_t> survivor_totals;
    for (const auto& v : b.views)
        if (!v.removed) survivor_totals.push_back(v.engagement);
    b.survivor_count = static_cast<std::int64_t>(survivor_totals.size());
    if (survivor_totals.empty()) {
        b.warnings.emplace_back("no surviving posts; virality threshold left at 0");
    } else {
        b.threshold = metrics::virality_threshold(survivor_totals);
    }
    auto is_viral = [&](std::int64_t total) {
        return static_cast<double>(total) >= b.threshold.threshold;
    };

    {
        std::vector<crawl::AlignedSeries> all = crawl::survivor_series(log, b.grid);
        const core::Period& baseline = b.periods.get(core::PeriodName::Baseline);
        for (auto& s : all)
            if (s.created_at >= baseline.start && s.created_at < baseline.end)
                b.baseline_series.push_back(std::move(s));
    }

    if (!b.baseline_series.empty()) {
        b.estimators = metrics::build_estimators(b.baseline_series, b.threshold.threshold,
                                                 b.grid, cfg.min_viral_support);
        b.estimators_built = true;
    } else {
        b.warnings.emplace_back(
            "no surviving baseline posts; engagement estimators unavailable");
    }

    if (b.estimators_built) {
        b.prevention = metrics::prevented_engagement_batch(b.removed.records, b.estimators);
    } else if (!b.removed.records.empty()) {
        b.warnings.emplace_back("removed posts present but no estimators; "
                                "prevented engagement not computed");
    }
    b.prevention_overall = summarize_prevention(b.prevention, nullptr);
    for (auto period : {core::PeriodName::Baseline, core::PeriodName::Jan6,
                        core::PeriodName::Jan12, core::PeriodName::RemovedPages}) {
        auto it = b.removed.partition.find(period);
        static const std::vector<std::size_t> kEmpty;
        const std::vector<std::size_t>& idx =
            it == b.removed.partition.end() ? kEmpty : it->second;
        b.prevention_by_period[period] = summarize_prevention(b.prevention, &idx);
    }
    {
        std::vector<std::size_t> delayed_idx;
        for (std::size_t i = 0; i < b.removed.records.size(); ++i)
            if (b.removed.records[i].delayed) delayed_idx.push_back(i);
        b.prevention_delayed = summarize_prevention(b.prevention, &delayed_idx);
    }

    if (b.estimators_built) {
        std::vector<core::DurationMin> pool;
        auto base_it = b.removed.partition.find(core::PeriodName::Baseline);
        if (base_it != b.removed.partition.end())
            for (std::size_t i : base_it->second)
                pool.push_back(b.removed.records[i].lifetime_lb);
        if (pool.empty()) {
            for (const auto& r : b.removed.records) pool.push_back(r.lifetime_lb);
            if (!pool.empty())
                b.warnings.emplace_back(
                    "no baseline removals; cut times bootstrapped from all removals");
        }
        if (pool.empty()) {
            b.warnings.emplace_back("no removed lifetimes to bootstrap; validation skipped");
        } else {
            b.validation = validation::validate_estimators(
                b.baseline_series, b.estimators, pool, cfg.validation_samples,
                core::mix_seed(b.seed, kValidationSeedSalt));
            b.validation_ran = true;
        }
    }

    const core::Period& baseline = b.periods.get(core::PeriodName::Baseline);
    for (auto target : {core::PeriodName::Jan6, core::PeriodName::Jan12}) {
        const core::Period& tp = b.periods.get(target);
        AnalysisBundle::WelchEntry entry;
        entry.label = core::to_string(target) + "_vs_Baseline";
        std::vector<double> a = metrics::daily_counts(bucket_last_observed(b.removed, target),
                                                      tp.start, tp.end);
        std::vector<double> base = metrics::daily_counts(
            bucket_last_observed(b.removed, core::PeriodName::Baseline), baseline.start,
            baseline.end);
        if (a.size() >= 2 && base.size() >= 2) {
            entry.result = metrics::welch_t_test(a, base);
            entry.ok = true;
        } else {
            entry.note = "needs at least two full days in each period";
        }
        b.welch_tests.push_back(std::move(entry));
    }

    auto bucket_lifetimes = [&](core::PeriodName period, bool viral) {
        std::vector<double> out;
        auto it = b.removed.partition.find(period);
        if (it == b.removed.partition.end()) return out;
        for (std::size_t i : it->second) {
            const auto& r = b.removed.records[i];
            if (is_viral(r.final_counts.total()) == viral)
                out.push_back(static_cast<double>(r.lifetime_lb));
        }
        return out;
    };
    for (auto target : {core::PeriodName::Jan6, core::PeriodName::Jan12}) {
        for (bool viral : {false, true}) {
            AnalysisBundle::MedianEntry entry;
            entry.label = core::to_string(target) + "_vs_Baseline";
            entry.viral = viral;
            std::vector<double> a = bucket_lifetimes(target, viral);
            std::vector<double> base = bucket_lifetimes(core::PeriodName::Baseline, viral);
            if (!a.empty() && !base.empty() && a.size() + base.size() >= 4) {
                entry.result = metrics::median_test(a, base);
                entry.ok = true;
            } else {
                entry.note = "not enough removals in this class";
            }
            b.median_tests.push_back(std::move(entry));
        }
    }

    b.removal_rates = metrics::removal_rates_by_category(b.views, pages);
    b.shares = metrics::engagement_share_breakdown(b.views, b.removed, pages, b.periods);
    b.table1 = metrics::dataset_summary(b.views, b.removed);
    b.top_impacted = metrics::top_impacted_pages(b.views);

    for (auto period : {core::PeriodName::Baseline, core::PeriodName::Jan6,
                        core::PeriodName::Jan12, core::PeriodName::RemovedPages}) {
        auto it = b.removed.partition.find(period);
        if (it == b.removed.partition.end() || it->second.empty()) continue;
        std::vector<core::DurationMin> lifetimes;
        lifetimes.reserve(it->second.size());
        for (std::size_t i : it->second)
            lifetimes.push_back(b.removed.records[i].lifetime_lb);
        b.lifetime_cdfs.emplace_back(period, metrics::lifetime_cdf(lifetimes));
    }

    for (const auto& s : b.baseline_series) {
        auto t80 = metrics::time_to_fraction(s.totals, b.grid, 0.8);
        if (!t80) continue;
        if (is_viral(s.totals.back()))
            b.t80_viral.push_back(*t80);
        else
            b.t80_non_viral.push_back(*t80);
    }

    {
        std::vector<bool> flags = infer::repeat_offender_flags(b.removed);
        for (std::size_t i = 0; i < b.removed.records.size(); ++i) {
            if (!b.removed.records[i].delayed) continue;
            ++b.delayed_removals;
            if (flags[i]) ++b.delayed_from_repeat_offenders;
        }
    }

    for (const auto& w : b.removed.warnings) b.warnings.push_back(w);
    return b;
}

sim::World stage_gen(const RunConfig& cfg, bool write) {
    sim::World world = sim::generate_world(cfg.scenario);
    if (write) sim::save_world(world, cfg.output_dir);
    return world;
}

crawl::ObservationLog stage_crawl(const RunConfig& cfg, const sim::World& world, bool write) {
    crawl::ObservationLog log = crawl::run_crawls(world, cfg.schedule);
    if (write) {
        fs::create_directories(cfg.output_dir);
        crawl::write_observations_csv(
            log, (fs::path(cfg.output_dir) / "observations.csv").string(), cfg.scenario.seed);
        crawl::write_followup_csv(log, (fs::path(cfg.output_dir) / "followup.csv").string(),
                                  cfg.scenario.seed);
    }
    return log;
}

crawl::IngestResult stage_ingest(const RunConfig& cfg, const std::string& observations_path,
                                 const std::string& followup_path,
                                 const std::string& pages_path) {
    (void)cfg;
    return crawl::ingest_snapshots(observations_path, followup_path, pages_path);
}

AnalysisBundle stage_analyze_from_disk(const RunConfig& cfg) {
    const fs::path dir(cfg.output_dir);
    crawl::IngestResult in = crawl::ingest_snapshots((dir / "observations.csv").string(),
                                                     (dir / "followup.csv").string(),
                                                     (dir / "pages.csv").string());
    return analyze(in.log, in.pages, cfg);
}

int run_all(const RunConfig& cfg) {
    const char* stage = "gen";
    try {
        sim::World world = stage_gen(cfg, true);
        stage = "crawl";
        crawl::ObservationLog log = stage_crawl(cfg, world, true);
        stage = "analyze";
        AnalysisBundle bundle = analyze(log, world.pages, cfg);
        stage = "report";
        report::write_all_reports(bundle, cfg, cfg.output_dir);
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "stage %s failed: %s\n", stage, e.what());
        return stage == std::string("gen")       ? 2
               : stage == std::string("crawl")   ? 3
               : stage == std::string("analyze") ? 4
                                                 : 5;
    }
}

std::vector<ScheduleComparisonRow> compare_schedules(
    const sim::World& world,
    const std::vector<std::pair<std::string, crawl::CrawlSchedule>>& schedules) {
    std::unordered_map<std::uint64_t, core::SimTime> true_removal_at;
    for (const auto& p : world.posts)
        if (p.removal) true_removal_at.emplace(p.post_id, p.removal->at);

    std::vector<ScheduleComparisonRow> rows;
    for (const auto& [label, schedule] : schedules) {
        crawl::ObservationLog log = crawl::run_crawls(world, schedule);
        const core::SimTime until = log.schedule.crawl_until;
        core::PeriodSet periods = periods_for_span(log.window_start, until + 1);
        infer::RemovedSet removed = infer::detect_removed(log, periods, {});

        ScheduleComparisonRow row;
        row.label = label;
        row.schedule = log.schedule;
        row.observed_removals = static_cast<std::int64_t>(removed.records.size());
        row.total_visits = log.total_visits;

        std::int64_t bounded = 0;
        double slack_sum = 0.0;
        for (const auto& rec : removed.records) {
            auto it = true_removal_at.find(rec.post_id);
            if (it == true_removal_at.end() || it->second > until) continue;
            slack_sum += static_cast<double>(it->second - rec.last_observed_at);
            ++bounded;
        }
        if (bounded > 0) row.mean_slack_min = slack_sum / static_cast<double>(bounded);

        for (const auto& [post_id, at] : true_removal_at) {
            if (at > until) continue;
            if (!log.post_meta.count(post_id)) ++row.missed_removals;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_schedule_comparison_csv(const std::vector<ScheduleComparisonRow>& rows,
                                   const std::string& path, std::uint64_t seed) {
    fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << core::file_header(seed) << "\n";
    out << "label,discovery_interval_min,history_interval_min,history_budget,"
           "crawl_until_min,missed_removals,observed_removals,mean_slack_min,total_visits\n";
    for (const auto& r : rows) {
        out << r.label << ',' << r.schedule.discovery_interval << ','
            << r.schedule.history_interval << ',' << r.schedule.history_budget << ','
            << r.schedule.crawl_until << ',' << r.missed_removals << ','
            << r.observed_removals << ',' << core::format_double(r.mean_slack_min) << ','
            << r.total_visits << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace modsim::pipeline
