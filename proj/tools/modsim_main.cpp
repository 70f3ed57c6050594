#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "modsim/core/csv.hpp"
#include "modsim/crawl/log_io.hpp"
#include "modsim/crawl/schedule.hpp"
#include "modsim/pipeline/run.hpp"
#include "modsim/report/reports.hpp"
#include "modsim/sim/world_io.hpp"

namespace fs = std::filesystem;
using namespace modsim;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::int64_t seed = -1;
    std::string out_dir;
    std::string format;
};

struct ScheduleOpts {
    std::string preset; // daily | hourly | custom
    std::int64_t discovery_interval = -1;
    std::int64_t history_interval = -1;
    std::int64_t history_budget = -1;
    std::int64_t followup_at = -1;
    std::int64_t crawl_until = std::numeric_limits<std::int64_t>::min();
};

pipeline::RunConfig make_config(const GlobalOpts& g, const ScheduleOpts& s) {
    pipeline::RunConfig cfg;
    if (!g.config_path.empty()) cfg = pipeline::load_run_config(g.config_path);
    if (g.seed >= 0) cfg.scenario.seed = static_cast<std::uint64_t>(g.seed);
    if (!g.out_dir.empty()) cfg.output_dir = g.out_dir;
    if (!g.format.empty()) cfg.format = g.format;

    if (s.preset == "daily") {
        cfg.schedule.discovery_interval = core::kMinutesPerDay;
        cfg.schedule.history_interval = core::kMinutesPerDay;
    } else if (s.preset == "hourly") {
        cfg.schedule.discovery_interval = core::kMinutesPerHour;
        cfg.schedule.history_interval = core::kMinutesPerHour;
    } // custom / empty: keep the config file's schedule
    if (s.discovery_interval > 0) cfg.schedule.discovery_interval = s.discovery_interval;
    if (s.history_interval > 0) cfg.schedule.history_interval = s.history_interval;
    if (s.history_budget > 0) cfg.schedule.history_budget = s.history_budget;
    if (s.followup_at > 0) cfg.schedule.followup_at = s.followup_at;
    if (s.crawl_until != std::numeric_limits<std::int64_t>::min())
        cfg.schedule.crawl_until = s.crawl_until;
    return cfg;
}

void add_schedule_flags(CLI::App* cmd, ScheduleOpts& s) {
    cmd->add_option("--schedule", s.preset, "crawl cadence preset")
        ->check(CLI::IsMember({"daily", "hourly", "custom"}));
    cmd->add_option("--discovery-interval-min", s.discovery_interval,
                    "minutes between discovery crawls");
    cmd->add_option("--history-interval-min", s.history_interval,
                    "minutes between history crawls");
    cmd->add_option("--history-budget", s.history_budget,
                    "snapshot records per history tick");
    cmd->add_option("--followup-at-min", s.followup_at, "follow-up pass time (minutes)");
    cmd->add_option("--crawl-until-min", s.crawl_until,
                    "last crawl tick (minutes; -1 = window end + 3 days)");
}

void print_ingest_report(const crawl::IngestReport& report) {
    std::printf("rows read: %zu, rejected: %zu\n", report.rows_read, report.rows_rejected);
    const std::size_t max_shown = 20;
    for (std::size_t i = 0; i < report.errors.size() && i < max_shown; ++i) {
        const auto& e = report.errors[i];
        std::printf("  %s:%zu: %s\n", e.file.c_str(), e.line, e.message.c_str());
    }
    if (report.errors.size() > max_shown)
        std::printf("  ... %zu more rejected rows\n", report.errors.size() - max_shown);
    for (const auto& w : report.warnings) std::printf("  warning: %s\n", w.c_str());
}

crawl::CrawlSchedule schedule_from_spec(const std::string& spec,
                                        const crawl::CrawlSchedule& base) {
    crawl::CrawlSchedule s = base;
    if (spec == "daily") {
        s.discovery_interval = core::kMinutesPerDay;
        s.history_interval = core::kMinutesPerDay;
        return s;
    }
    if (spec == "hourly") {
        s.discovery_interval = core::kMinutesPerHour;
        s.history_interval = core::kMinutesPerHour;
        return s;
    }
    // custom:<discovery>:<history>[:<budget>]
    if (spec.rfind("custom:", 0) == 0) {
        std::vector<std::string> parts;
        std::size_t pos = 0;
        while (pos <= spec.size()) {
            std::size_t colon = spec.find(':', pos);
            if (colon == std::string::npos) {
                parts.push_back(spec.substr(pos));
                break;
            }
            parts.push_back(spec.substr(pos, colon - pos));
            pos = colon + 1;
        }
        if (parts.size() < 3) throw CLI::ValidationError("--schedules", "bad spec: " + spec);
        s.discovery_interval = std::stoll(parts[1]);
        s.history_interval = std::stoll(parts[2]);
        if (parts.size() > 3) s.history_budget = std::stoll(parts[3]);
        return s;
    }
    throw CLI::ValidationError("--schedules", "unknown schedule spec: " + spec);
}

void write_pages_csv(const std::vector<core::PageProfile>& pages, const std::string& path,
                     std::uint64_t seed) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << core::file_header(seed) << "\n";
    out << "page_id,partisanship,misinformation,posts_per_day,audience_scale\n";
    for (const auto& p : pages) {
        out << p.page_id << ',' << core::to_string(p.partisanship) << ','
            << (p.misinformation ? 1 : 0) << ',' << core::format_double(p.posts_per_day) << ','
            << core::format_double(p.audience_scale) << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"content ecosystem simulator and removal analysis pipeline"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    ScheduleOpts sched;
    app.add_option("--config", g.config_path, "JSON run configuration file")
        ->check(CLI::ExistingFile);
    app.add_option("--seed", g.seed, "override the scenario seed");
    app.add_option("--out", g.out_dir, "output directory");
    app.add_option("--format", g.format, "tabular output format")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI::App* gen = app.add_subcommand("gen", "generate a ground-truth world");
    CLI::App* crawl_cmd =
        app.add_subcommand("crawl", "run discovery/history/follow-up crawls on a saved world");
    add_schedule_flags(crawl_cmd, sched);

    CLI::App* ingest_cmd =
        app.add_subcommand("ingest", "validate snapshot exports and normalize them");
    std::string obs_path, followup_path, pages_path;
    ingest_cmd->add_option("--observations", obs_path, "observations csv");
    ingest_cmd->add_option("--followup", followup_path, "follow-up csv");
    ingest_cmd->add_option("--pages", pages_path, "pages csv");

    CLI::App* infer_cmd =
        app.add_subcommand("infer", "detect removed posts from crawl artifacts");
    CLI::App* metrics_cmd =
        app.add_subcommand("metrics", "compute engagement metrics and prevented engagement");
    CLI::App* validate_cmd =
        app.add_subcommand("validate", "run the estimator validation protocol");
    CLI::App* report_cmd = app.add_subcommand("report", "emit summary tables and figure data");
    CLI::App* run_all_cmd = app.add_subcommand("run-all", "full pipeline: gen through report");
    add_schedule_flags(run_all_cmd, sched);

    CLI::App* compare_cmd =
        app.add_subcommand("compare-schedules", "crawl one world under several schedules");
    std::vector<std::string> schedule_specs{"daily", "hourly"};
    compare_cmd->add_option("--schedules", schedule_specs,
                            "schedule specs: daily, hourly, or custom:<disc>:<hist>[:<budget>]");

    CLI11_PARSE(app, argc, argv);

    try {
        pipeline::RunConfig cfg = make_config(g, sched);
        const fs::path out(cfg.output_dir);

        if (gen->parsed()) {
            sim::World world = pipeline::stage_gen(cfg, true);
            std::printf("world: %zu pages, %zu posts -> %s\n", world.pages.size(),
                        world.posts.size(), cfg.output_dir.c_str());
            return 0;
        }
        if (crawl_cmd->parsed()) {
            sim::World world = sim::load_world(cfg.output_dir);
            crawl::ObservationLog log = pipeline::stage_crawl(cfg, world, true);
            std::printf("observations: %zu, posts discovered: %zu, visits: %lld\n",
                        log.observations.size(), log.post_meta.size(),
                        static_cast<long long>(log.total_visits));
            return 0;
        }
        if (ingest_cmd->parsed()) {
            if (obs_path.empty()) obs_path = (out / "observations.csv").string();
            if (followup_path.empty()) followup_path = (out / "followup.csv").string();
            if (pages_path.empty()) pages_path = (out / "pages.csv").string();
            crawl::IngestResult result =
                pipeline::stage_ingest(cfg, obs_path, followup_path, pages_path);
            print_ingest_report(result.report);
            fs::create_directories(out);
            crawl::write_observations_csv(result.log, (out / "observations.csv").string(),
                                          cfg.scenario.seed);
            crawl::write_followup_csv(result.log, (out / "followup.csv").string(),
                                      cfg.scenario.seed);
            write_pages_csv(result.pages, (out / "pages.csv").string(), cfg.scenario.seed);
            std::printf("normalized artifacts -> %s\n", cfg.output_dir.c_str());
            return 0;
        }

        if (infer_cmd->parsed() || metrics_cmd->parsed() || validate_cmd->parsed() ||
            report_cmd->parsed()) {
            pipeline::AnalysisBundle bundle = pipeline::stage_analyze_from_disk(cfg);
            if (infer_cmd->parsed()) {
                report::write_table(report::removed_set_table(bundle.removed),
                                    cfg.output_dir, cfg.format, bundle.seed);
                std::printf("removed posts: %zu (of %zu observed)\n",
                            bundle.removed.records.size(), bundle.views.size());
                for (const auto& w : bundle.removed.warnings)
                    std::printf("  warning: %s\n", w.c_str());
            }
            if (metrics_cmd->parsed()) {
                report::write_table(report::prevention_table(bundle.prevention),
                                    cfg.output_dir, cfg.format, bundle.seed);
                std::ofstream ms(out / "metrics.json", std::ios::binary | std::ios::trunc);
                ms << report::metrics_json(bundle);
                std::printf("virality threshold: %s, removed: %zu, prevention rate: %s\n",
                            core::format_double(bundle.threshold.threshold).c_str(),
                            bundle.removed.records.size(),
                            core::format_double(bundle.prevention_overall.aggregate_rate)
                                .c_str());
            }
            if (validate_cmd->parsed()) {
                std::ofstream vs(out / "validation_report.json",
                                 std::ios::binary | std::ios::trunc);
                vs << report::validation_json(bundle, cfg);
                std::printf(
                    "validation: %lld samples, non-viral net error %s, viral net error %s\n",
                    static_cast<long long>(bundle.validation.n_samples),
                    core::format_double(bundle.validation.non_viral.net_error).c_str(),
                    core::format_double(bundle.validation.viral.net_error).c_str());
            }
            if (report_cmd->parsed()) {
                report::write_table(report::dataset_summary_table(bundle.table1),
                                    cfg.output_dir, cfg.format, bundle.seed);
                report::write_table(report::lifetime_cdf_table(bundle.lifetime_cdfs),
                                    cfg.output_dir, cfg.format, bundle.seed);
                report::write_table(
                    report::time_to_fraction_table(bundle.grid, bundle.t80_non_viral,
                                                   bundle.t80_viral),
                    cfg.output_dir, cfg.format, bundle.seed);
                report::write_table(report::share_breakdown_table(bundle.shares),
                                    cfg.output_dir, cfg.format, bundle.seed);
                report::write_table(report::top_impacted_table(bundle.top_impacted),
                                    cfg.output_dir, cfg.format, bundle.seed);
                std::printf("report tables -> %s\n", cfg.output_dir.c_str());
            }
            return 0;
        }

        if (run_all_cmd->parsed()) {
            int rc = pipeline::run_all(cfg);
            if (rc == 0) std::printf("pipeline complete -> %s\n", cfg.output_dir.c_str());
            return rc;
        }

        if (compare_cmd->parsed()) {
            if (schedule_specs.size() < 2)
                throw std::invalid_argument("compare-schedules needs at least two schedules");
            sim::World world = pipeline::stage_gen(cfg, false);
            std::vector<std::pair<std::string, crawl::CrawlSchedule>> schedules;
            for (const auto& spec : schedule_specs)
                schedules.emplace_back(spec, schedule_from_spec(spec, cfg.schedule));
            auto rows = pipeline::compare_schedules(world, schedules);
            pipeline::write_schedule_comparison_csv(
                rows, (out / "schedule_comparison.csv").string(), cfg.scenario.seed);
            for (const auto& r : rows)
                std::printf("%s: missed %lld, observed %lld, mean slack %.1f min, visits %lld\n",
                            r.label.c_str(), static_cast<long long>(r.missed_removals),
                            static_cast<long long>(r.observed_removals), r.mean_slack_min,
                            static_cast<long long>(r.total_visits));
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
