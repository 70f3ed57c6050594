#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "modsim/core/parallel.hpp"
#include "modsim/crawl/series.hpp"
#include "modsim/crawl/simulate.hpp"
#include "modsim/infer/removed.hpp"
#include "modsim/metrics/estimator.hpp"
#include "modsim/metrics/prevention.hpp"
#include "modsim/metrics/virality.hpp"
#include "modsim/pipeline/run.hpp"
#include "modsim/sim/engagement_stats.hpp"
#include "modsim/sim/generator.hpp"
#include "modsim/validation/validate.hpp"

using namespace modsim;
using Clock = std::chrono::steady_clock;

namespace {

template <typename F>
double best_ms(int repeats, F&& f) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        auto t0 = Clock::now();
        f();
        auto t1 = Clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void row(const char* name, double serial_ms, double parallel_ms, bool match) {
    std::printf("%-28s %10.2f ms %10.2f ms %7.2fx  %s\n", name, serial_ms, parallel_ms,
                parallel_ms > 0 ? serial_ms / parallel_ms : 0.0, match ? "match" : "MISMATCH");
}

bool same_index(const metrics::EstimatorIndex& a, const metrics::EstimatorIndex& b) {
    if (a.pages.size() != b.pages.size()) return false;
    for (int c = 0; c < 2; ++c) {
        if (a.global_count[c] != b.global_count[c]) return false;
        if (a.global_sums[c] != b.global_sums[c]) return false;
    }
    for (const auto& [page, agg] : a.pages) {
        auto it = b.pages.find(page);
        if (it == b.pages.end()) return false;
        for (int c = 0; c < 2; ++c) {
            if (agg.count[c] != it->second.count[c]) return false;
            if (agg.sums[c] != it->second.sums[c]) return false;
        }
    }
    return true;
}

bool same_prevention(const std::vector<metrics::PreventionResult>& a,
                     const std::vector<metrics::PreventionResult>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].post_id != b[i].post_id || a[i].observed != b[i].observed ||
            a[i].prevented != b[i].prevented || a[i].potential != b[i].potential ||
            a[i].prevention_rate != b[i].prevention_rate)
            return false;
    }
    return true;
}

bool same_validation(const validation::ValidationReport& a,
                     const validation::ValidationReport& b) {
    auto same_class = [](const validation::ClassReport& x, const validation::ClassReport& y) {
        return x.count == y.count && x.accuracy_mean == y.accuracy_mean &&
               x.net_error == y.net_error && x.sum_predicted == y.sum_predicted &&
               x.sum_truth == y.sum_truth;
    };
    return a.n_samples == b.n_samples && same_class(a.non_viral, b.non_viral) &&
           same_class(a.viral, b.viral);
}

} // namespace

int main(int argc, char** argv) {
    std::size_t n_pages = 150;
    int repeats = 3;
    if (argc > 1) n_pages = static_cast<std::size_t>(std::atoll(argv[1]));
    if (argc > 2) repeats = std::atoi(argv[2]);

    sim::ScenarioConfig cfg;
    cfg.seed = 99;
    cfg.n_pages = n_pages;

    std::printf("generating world (%zu pages)...\n", n_pages);
    sim::World world = sim::generate_world(cfg);
    std::printf("posts: %zu, threads available: %d\n", world.posts.size(),
                core::thread_count());

    std::printf("%-28s %13s %13s %8s  %s\n", "kernel", "serial", "parallel", "speedup",
                "results");

    {
        sim::AccrualShare s, p;
        double ts = best_ms(repeats, [&] { s = sim::accrued_share_at_serial(world, 1800); });
        core::set_thread_count(0);
        double tp = best_ms(repeats, [&] { p = sim::accrued_share_at(world, 1800); });
        row("accrued_share_at(30h)", ts, tp,
            s.accrued == p.accrued && s.potential == p.potential);
    }
    {
        sim::ReachShare s, p;
        double ts = best_ms(repeats, [&] {
            s = sim::reach_within_serial(world, 0.8, core::kMinutesPerDay, 1 << 20, false);
        });
        double tp = best_ms(repeats, [&] {
            p = sim::reach_within(world, 0.8, core::kMinutesPerDay, 1 << 20, false);
        });
        row("reach_within(80%,1d)", ts, tp,
            s.reached == p.reached && s.eligible == p.eligible);
    }

    std::printf("crawling (daily schedule)...\n");
    crawl::ObservationLog log = crawl::run_crawls(world, crawl::daily_schedule());
    core::StepGrid grid = core::default_step_grid();
    std::vector<crawl::AlignedSeries> series = crawl::survivor_series(log, grid);
    std::vector<std::int64_t> totals;
    totals.reserve(series.size());
    for (const auto& s : series) totals.push_back(s.totals.back());
    const double threshold = metrics::virality_threshold(totals).threshold;

    metrics::EstimatorIndex serial_index, parallel_index;
    {
        double ts = best_ms(repeats, [&] {
            serial_index = metrics::build_estimators_serial(series, threshold, grid);
        });
        double tp = best_ms(
            repeats, [&] { parallel_index = metrics::build_estimators(series, threshold, grid); });
        row("build_estimators", ts, tp, same_index(serial_index, parallel_index));
    }

    core::PeriodSet periods =
        pipeline::periods_for_span(log.window_start, log.schedule.crawl_until + 1);
    infer::RemovedSet removed = infer::detect_removed(log, periods, {});
    std::printf("removed posts: %zu\n", removed.records.size());

    {
        std::vector<metrics::PreventionResult> s, p;
        core::set_thread_count(1);
        double ts = best_ms(repeats, [&] {
            s = metrics::prevented_engagement_batch_serial(removed.records, parallel_index);
        });
        core::set_thread_count(0);
        double tp = best_ms(repeats, [&] {
            p = metrics::prevented_engagement_batch(removed.records, parallel_index);
        });
        row("prevented_engagement_batch", ts, tp, same_prevention(s, p));
    }

    {
        std::vector<core::DurationMin> pool;
        for (const auto& r : removed.records) pool.push_back(r.lifetime_lb);
        if (pool.empty()) pool.push_back(core::kMinutesPerDay);
        validation::ValidationReport s, p;
        core::set_thread_count(1);
        double ts = best_ms(repeats, [&] {
            s = validation::validate_estimators(series, parallel_index, pool, 10000, 7);
        });
        core::set_thread_count(0);
        double tp = best_ms(repeats, [&] {
            p = validation::validate_estimators(series, parallel_index, pool, 10000, 7);
        });
        row("validate_estimators(10k)", ts, tp, same_validation(s, p));
    }

    return 0;
}
