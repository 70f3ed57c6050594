#include <doctest.h>

#include <stdexcept>

#include "modsim/crawl/simulate.hpp"
#include "modsim/infer/removed.hpp"
#include "modsim/metrics/aggregates.hpp"
#include "modsim/metrics/estimator.hpp"
#include "modsim/metrics/prevention.hpp"
#include "modsim/metrics/virality.hpp"
#include "modsim/sim/generator.hpp"

using namespace modsim;
using doctest::Approx;

namespace {

core::StepGrid small_grid() {
    core::StepGrid g;
    g.offsets = {100, 200, 400, 800};
    return g;
}

crawl::AlignedSeries make_series(std::uint64_t post, std::uint64_t page,
                                 std::vector<std::int64_t> totals) {
    crawl::AlignedSeries s;
    s.post_id = post;
    s.page_id = page;
    s.totals = std::move(totals);
    return s;
}

infer::RemovedPostRecord make_removed(std::uint64_t post, std::uint64_t page,
                                      core::DurationMin lb, std::int64_t observed) {
    infer::RemovedPostRecord r;
    r.post_id = post;
    r.page_id = page;
    r.lifetime_lb = lb;
    r.last_observed_at = lb;
    r.final_counts.reactions = observed;
    r.delayed = lb > infer::kDelayedThresholdMin;
    return r;
}

} // namespace

TEST_CASE("virality threshold on fixed vectors") {
    // mean 25, population sigma 43.301270, threshold 154.903811 (frozen from
    // an independent calculation).
    auto t = metrics::virality_threshold({0, 0, 0, 100});
    CHECK(t.mean == Approx(25.0));
    CHECK(t.stddev == Approx(43.301270).epsilon(1e-6));
    CHECK(t.threshold == Approx(154.903811).epsilon(1e-6));

    t = metrics::virality_threshold({5, 5, 5});
    CHECK(t.mean == Approx(5.0));
    CHECK(t.stddev == Approx(0.0));
    CHECK(t.threshold == Approx(5.0));

    CHECK_THROWS_AS(metrics::virality_threshold({}), std::invalid_argument);
}

TEST_CASE("estimator index pools series by page and class") {
    auto grid = small_grid();
    std::vector<crawl::AlignedSeries> series = {
        make_series(1, 1, {10, 20, 30, 40}),
        make_series(2, 1, {30, 40, 50, 60}),
        make_series(3, 2, {2, 4, 6, 8}),
    };
    auto index = metrics::build_estimators(series, 1000.0, grid);
    CHECK(index.global_count[0] == 3);
    CHECK(index.global_count[1] == 0);
    CHECK(!index.viral_class(999));
    CHECK(index.viral_class(1000));

    auto page1 = metrics::resolve_estimator(index, 1, false);
    CHECK(page1.from_page);
    CHECK(page1.support == 2);
    CHECK(page1.mean_at_step == std::vector<double>{20, 30, 40, 50});

    auto page2 = metrics::resolve_estimator(index, 2, false);
    CHECK(page2.support == 1);
    CHECK(page2.mean_at_step == std::vector<double>{2, 4, 6, 8});

    // Unknown page falls back to the global curve of the class.
    auto other = metrics::resolve_estimator(index, 99, false);
    CHECK(!other.from_page);
    CHECK(other.support == 3);
    CHECK(other.mean_at_step[0] == Approx(14.0));
    CHECK(other.mean_at_step[3] == Approx(36.0));
}

TEST_CASE("viral page curves need more than min_viral_support posts") {
    auto grid = small_grid();
    std::vector<crawl::AlignedSeries> series;
    for (int i = 0; i < 10; ++i) {
        series.push_back(make_series(i, 1, {100, 200, 300, 400 + i}));
    }
    series.push_back(make_series(100, 2, {1, 2, 3, 4}));

    auto ten = metrics::build_estimators(series, 100.0, grid, 10);
    auto r = metrics::resolve_estimator(ten, 1, true);
    CHECK(!r.from_page); // 10 is not enough
    CHECK(r.support == 10);
    CHECK(r.viral);

    series.push_back(make_series(101, 1, {100, 200, 300, 420}));
    auto eleven = metrics::build_estimators(series, 100.0, grid, 10);
    r = metrics::resolve_estimator(eleven, 1, true);
    CHECK(r.from_page);
    CHECK(r.support == 11);

    // Non-viral on a viral-only page: global non-viral carries it.
    r = metrics::resolve_estimator(eleven, 1, false);
    CHECK(!r.from_page);
    CHECK(r.support == 1);
    CHECK(!r.viral);

    // A viral lookup with no viral posts anywhere falls through to the other
    // class's global curve.
    std::vector<crawl::AlignedSeries> quiet = {make_series(1, 1, {1, 2, 3, 4})};
    auto only_nv = metrics::build_estimators(quiet, 1e9, grid);
    r = metrics::resolve_estimator(only_nv, 1, true);
    CHECK(!r.viral);
    CHECK(r.support == 1);
}

TEST_CASE("leave-one-out removes a series from its own page only") {
    auto grid = small_grid();
    std::vector<crawl::AlignedSeries> series = {
        make_series(1, 1, {10, 20, 30, 40}),
        make_series(2, 1, {30, 40, 50, 60}),
        make_series(3, 2, {2, 4, 6, 8}),
    };
    auto index = metrics::build_estimators(series, 1000.0, grid);

    auto loo = metrics::resolve_estimator(index, 1, false, &series[0]);
    CHECK(loo.from_page);
    CHECK(loo.support == 1);
    CHECK(loo.mean_at_step == std::vector<double>{30, 40, 50, 60});

    // Excluding page 2's only series drops to the global curve, which is
    // deliberately not re-fit.
    auto fallback = metrics::resolve_estimator(index, 2, false, &series[2]);
    CHECK(!fallback.from_page);
    CHECK(fallback.support == 3);

    // The exclusion does not leak into other pages.
    auto untouched = metrics::resolve_estimator(index, 1, false, &series[2]);
    CHECK(untouched.support == 2);
    CHECK(untouched.mean_at_step == std::vector<double>{20, 30, 40, 50});
}

TEST_CASE("estimator construction rejects bad input") {
    auto grid = small_grid();
    CHECK_THROWS_AS(metrics::build_estimators({}, 10.0, grid), std::invalid_argument);
    std::vector<crawl::AlignedSeries> wrong = {make_series(1, 1, {1, 2})};
    CHECK_THROWS_AS(metrics::build_estimators(wrong, 10.0, grid), std::invalid_argument);

    metrics::EstimatorIndex empty;
    empty.grid = grid;
    CHECK_THROWS_AS(metrics::resolve_estimator(empty, 1, false), std::runtime_error);
}

TEST_CASE("prevented engagement anchors at the lifetime floor") {
    auto grid = small_grid();
    // Four identical survivors: the estimator mean equals the shared curve.
    std::vector<crawl::AlignedSeries> series;
    for (int i = 0; i < 4; ++i) series.push_back(make_series(i, 1, {200, 500, 800, 941}));
    auto index = metrics::build_estimators(series, 1e9, grid);

    auto r = metrics::prevented_engagement(make_removed(50, 1, 200, 500), index);
    CHECK(r.observed == 500);
    CHECK(r.prevented == Approx(441.0));
    CHECK(r.potential == Approx(941.0));
    CHECK(r.prevention_rate == Approx(441.0 / 941.0));
    CHECK(r.from_page_estimator);
    CHECK(r.estimator_support == 4);
    CHECK(!r.viral);

    // A lifetime between grid steps anchors at the step below.
    r = metrics::prevented_engagement(make_removed(51, 1, 399, 500), index);
    CHECK(r.prevented == Approx(441.0));

    // Removed before the first offset with nothing observed: everything was
    // prevented.
    r = metrics::prevented_engagement(make_removed(52, 1, 50, 0), index);
    CHECK(r.observed == 0);
    CHECK(r.prevented == Approx(941.0));
    CHECK(r.prevention_rate == Approx(1.0));

    // Removed at or past the final step: nothing left to prevent.
    r = metrics::prevented_engagement(make_removed(53, 1, 800, 941), index);
    CHECK(r.prevented == Approx(0.0));
    CHECK(r.prevention_rate == Approx(0.0));
    r = metrics::prevented_engagement(make_removed(54, 1, 100000, 941), index);
    CHECK(r.prevented == Approx(0.0));

    // Zero observed, zero estimator tail: the rate guards division by zero.
    std::vector<crawl::AlignedSeries> flat = {make_series(9, 3, {0, 0, 0, 0})};
    auto flat_index = metrics::build_estimators(flat, 1e9, grid);
    auto zero = metrics::prevented_engagement(make_removed(55, 3, 50, 0), flat_index);
    CHECK(zero.potential == Approx(0.0));
    CHECK(zero.prevention_rate == Approx(0.0));
}

TEST_CASE("prevention classifies by observed engagement") {
    auto grid = small_grid();
    std::vector<crawl::AlignedSeries> series = {
        make_series(1, 1, {10, 20, 30, 40}),
        make_series(2, 1, {100, 400, 700, 1000}),
    };
    auto index = metrics::build_estimators(series, 1000.0, grid);
    // Observed 1000 crosses the threshold: the viral curve is used.
    auto viral = metrics::prevented_engagement(make_removed(7, 1, 100, 1000), index);
    CHECK(viral.viral);
    CHECK(viral.prevented == Approx(1000.0 - 100.0));
    auto quiet = metrics::prevented_engagement(make_removed(8, 1, 100, 999), index);
    CHECK(!quiet.viral);
    CHECK(quiet.prevented == Approx(40.0 - 10.0));
}

TEST_CASE("prevention batch parity and order") {
    auto grid = small_grid();
    std::vector<crawl::AlignedSeries> series;
    for (int i = 0; i < 50; ++i) {
        series.push_back(make_series(i, i % 7, {i, 2 * i, 3 * i, 4 * i + 10}));
    }
    auto index = metrics::build_estimators(series, 150.0, grid);
    std::vector<infer::RemovedPostRecord> records;
    for (int i = 0; i < 200; ++i) {
        records.push_back(make_removed(1000 + i, i % 9, 50 + i * 7, i * 3));
    }
    auto par = metrics::prevented_engagement_batch(records, index);
    auto ser = metrics::prevented_engagement_batch_serial(records, index);
    REQUIRE(par.size() == records.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
        CHECK(par[i].post_id == records[i].post_id);
        CHECK(par[i].prevented == ser[i].prevented);
        CHECK(par[i].potential == ser[i].potential);
        CHECK(par[i].prevention_rate == ser[i].prevention_rate);
        CHECK(par[i].viral == ser[i].viral);
    }
}

TEST_CASE("time to fraction") {
    auto grid = small_grid();
    CHECK(metrics::time_to_fraction({0, 10, 10, 99}, grid, 0.8) == 800);
    CHECK(metrics::time_to_fraction({0, 10, 10, 99}, grid, 0.1) == 200);
    CHECK(metrics::time_to_fraction({80, 80, 80, 100}, grid, 0.8) == 100);
    CHECK(!metrics::time_to_fraction({0, 0, 0, 0}, grid).has_value());
    CHECK_THROWS_AS(metrics::time_to_fraction({1, 2}, grid), std::invalid_argument);
}

TEST_CASE("weighted removal rate") {
    std::vector<metrics::PostEngagementView> views(3);
    views[0].engagement = 100;
    views[0].removed = true;
    views[1].engagement = 250;
    views[2].engagement = 50;
    views[2].removed = true;
    CHECK(metrics::weighted_removal_rate(views) == Approx(150.0 / 400.0));
    CHECK(metrics::weighted_removal_rate({}) == 0.0);
    std::vector<metrics::PostEngagementView> dead(2);
    dead[0].removed = true;
    CHECK(metrics::weighted_removal_rate(dead) == 0.0);
}

TEST_CASE("removal rates per page category") {
    std::vector<core::PageProfile> pages(2);
    pages[0].page_id = 0;
    pages[0].partisanship = core::Partisanship::Center;
    pages[1].page_id = 1;
    pages[1].partisanship = core::Partisanship::FarRight;
    pages[1].misinformation = true;

    std::vector<metrics::PostEngagementView> views(3);
    views[0].page_id = 0;
    views[0].engagement = 100;
    views[0].removed = true;
    views[1].page_id = 0;
    views[1].engagement = 300;
    views[2].page_id = 1;
    views[2].engagement = 50;
    views[2].removed = true;

    auto cells = metrics::removal_rates_by_category(views, pages);
    REQUIRE(cells.size() == 10);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        CHECK(cells[i].partisanship == static_cast<core::Partisanship>(i / 2));
        CHECK(cells[i].misinformation == (i % 2 == 1));
    }
    const auto& center = cells[2 * 2 + 0];
    CHECK(center.total_posts == 2);
    CHECK(center.removed_posts == 1);
    CHECK(center.rate == Approx(0.25));
    const auto& fr = cells[4 * 2 + 1];
    CHECK(fr.rate == Approx(1.0));
    CHECK(cells[0].total_posts == 0);
    CHECK(cells[0].rate == 0.0);
}

TEST_CASE("engagement share rows sum to one") {
    std::vector<core::PageProfile> pages(2);
    pages[0].page_id = 0;
    pages[0].partisanship = core::Partisanship::FarLeft;
    pages[1].page_id = 1;
    pages[1].partisanship = core::Partisanship::FarRight;

    infer::RemovedSet removed;
    removed.records.push_back(make_removed(5, 1, 100, 60));
    removed.records[0].period = core::PeriodName::Jan6;

    std::vector<metrics::PostEngagementView> views(3);
    views[0].post_id = 1;
    views[0].page_id = 0;
    views[0].created_at = core::days(1);
    views[0].engagement = 30;
    views[1].post_id = 2;
    views[1].page_id = 1;
    views[1].created_at = core::days(2);
    views[1].engagement = 90;
    views[2].post_id = 5;
    views[2].page_id = 1;
    views[2].engagement = 60;
    views[2].removed = true;
    views[2].removed_index = 0;

    auto periods = core::default_periods(0, core::days(33));
    auto rows = metrics::engagement_share_breakdown(views, removed, pages, periods);
    REQUIRE(rows.size() == 2);

    CHECK(rows[0].period == core::PeriodName::Baseline);
    CHECK(!rows[0].removed);
    CHECK(rows[0].engagement[0] == 30);
    CHECK(rows[0].engagement[4] == 90);
    CHECK(rows[0].share[0] == Approx(0.25));
    CHECK(rows[0].share[4] == Approx(0.75));

    CHECK(rows[1].period == core::PeriodName::Jan6);
    CHECK(rows[1].removed);
    CHECK(rows[1].share[4] == Approx(1.0));

    for (const auto& row : rows) {
        double sum = 0;
        for (double s : row.share) sum += s;
        CHECK(sum == Approx(1.0));
    }
}

TEST_CASE("top impacted pages") {
    std::vector<metrics::PostEngagementView> views(5);
    // Page 1: removals of 100 and 50 out of 200 total engagement.
    views[0].page_id = 1;
    views[0].engagement = 100;
    views[0].removed = true;
    views[1].page_id = 1;
    views[1].engagement = 50;
    views[1].removed = true;
    views[2].page_id = 1;
    views[2].engagement = 50;
    // Page 2: one removal of 200.
    views[3].page_id = 2;
    views[3].engagement = 200;
    views[3].removed = true;
    // Page 3: never removed, excluded.
    views[4].page_id = 3;
    views[4].engagement = 1000;

    auto top = metrics::top_impacted_pages(views);
    REQUIRE(top.size() == 2);
    CHECK(top[0].page_id == 2);
    CHECK(top[0].removed_engagement == 200);
    CHECK(top[1].page_id == 1);
    CHECK(top[1].removed_engagement == 150);
    CHECK(top[1].removed_posts == 2);
    CHECK(top[1].removed_share == Approx(0.75));
}

TEST_CASE("dataset summary identities on a crawled world") {
    sim::ScenarioConfig cfg;
    cfg.seed = 83;
    cfg.n_pages = 40;
    cfg.window_end = core::days(20);
    cfg.removal_fraction = 0.05;
    auto world = sim::generate_world(cfg);
    auto log = crawl::run_crawls(world, crawl::daily_schedule());
    auto periods = core::default_periods(0, log.schedule.followup_at + 1);
    auto removed = infer::detect_removed(log, periods);
    auto views = metrics::engagement_views(log, removed);
    auto rows = metrics::dataset_summary(views, removed);

    auto row = [&](const std::string& label) -> const metrics::SummaryRow& {
        for (const auto& r : rows)
            if (r.label == label) return r;
        REQUIRE(false);
        return rows[0];
    };

    REQUIRE(rows.size() == 8);
    const auto& full = row("full");
    const auto& rem = row("removed");
    const auto& non = row("non_removed");
    CHECK(full.posts == rem.posts + non.posts);
    CHECK(full.engagement == rem.engagement + non.engagement);
    CHECK(rem.posts == static_cast<std::int64_t>(removed.records.size()));
    CHECK(non.delayed_posts == 0);
    CHECK(full.delayed_posts == rem.delayed_posts);

    std::int64_t bucket_posts = 0, bucket_delayed = 0;
    for (const char* label : {"removed_Baseline", "removed_Jan6", "removed_Jan12",
                              "removed_RemovedPages"}) {
        bucket_posts += row(label).posts;
        bucket_delayed += row(label).delayed_posts;
    }
    CHECK(bucket_posts == rem.posts);
    CHECK(bucket_delayed == rem.delayed_posts);

    const auto& impacted = row("impacted_publishers");
    CHECK(impacted.posts >= rem.posts);
    CHECK(impacted.posts <= full.posts);

    // Views merge removed records and follow-up survivors, ordered by id.
    std::int64_t removed_views = 0;
    for (std::size_t i = 0; i < views.size(); ++i) {
        if (i > 0) CHECK(views[i - 1].post_id < views[i].post_id);
        if (views[i].removed) {
            ++removed_views;
            const auto& rec = removed.records[static_cast<std::size_t>(views[i].removed_index)];
            CHECK(rec.post_id == views[i].post_id);
            CHECK(rec.final_counts.total() == views[i].engagement);
        }
    }
    CHECK(removed_views == rem.posts);
}

TEST_CASE("daily counts bucket full days only") {
    auto counts = metrics::daily_counts({0, 100, 1440, 2000, 2890}, 0, 3000);
    REQUIRE(counts.size() == 2);
    CHECK(counts[0] == 2.0);
    CHECK(counts[1] == 2.0);

    CHECK(metrics::daily_counts({5}, 10, 10).empty());
    auto shifted = metrics::daily_counts({1500, 2000, 100}, 1440, 4320);
    REQUIRE(shifted.size() == 2);
    CHECK(shifted[0] == 2.0); // the t=100 event precedes the span
    CHECK(shifted[1] == 0.0);
}

TEST_CASE("lifetime cdf reaches one") {
    auto cdf = metrics::lifetime_cdf({720, 1440, 2880}, 2.0, 0.5);
    REQUIRE(cdf.size() == 5);
    CHECK(cdf[0].day == Approx(0.0));
    CHECK(cdf[0].fraction == Approx(0.0));
    CHECK(cdf[1].fraction == Approx(1.0 / 3.0)); // day 0.5 covers the 720 lifetime
    CHECK(cdf[2].fraction == Approx(2.0 / 3.0));
    CHECK(cdf[3].fraction == Approx(2.0 / 3.0));
    CHECK(cdf[4].fraction == Approx(1.0));

    // The grid stretches past max_day until the longest lifetime is covered.
    auto stretched = metrics::lifetime_cdf({1440, 4320}, 1.0, 0.5);
    CHECK(stretched.back().day == Approx(3.0));
    CHECK(stretched.back().fraction == Approx(1.0));
    for (std::size_t i = 1; i < stretched.size(); ++i) {
        CHECK(stretched[i].fraction >= stretched[i - 1].fraction);
    }

    CHECK(metrics::lifetime_cdf({}).empty());
}
