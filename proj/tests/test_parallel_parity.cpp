#include <doctest.h>

#include "modsim/core/parallel.hpp"
#include "modsim/crawl/series.hpp"
#include "modsim/crawl/simulate.hpp"
#include "modsim/infer/removed.hpp"
#include "modsim/metrics/estimator.hpp"
#include "modsim/metrics/prevention.hpp"
#include "modsim/sim/engagement_stats.hpp"
#include "modsim/sim/generator.hpp"
#include "modsim/validation/validate.hpp"

using namespace modsim;

// Every OpenMP kernel has a serial reference; these fixtures pin bitwise
// agreement on a mid-size generated world rather than toy arrays.

namespace {

struct Fixture {
    sim::World world;
    crawl::ObservationLog log;
    std::vector<crawl::AlignedSeries> survivors;
    infer::RemovedSet removed;
    metrics::EstimatorIndex index;
    std::vector<core::DurationMin> lifetimes;

    Fixture() {
        sim::ScenarioConfig cfg;
        cfg.seed = 101;
        cfg.n_pages = 80;
        cfg.window_end = core::days(24);
        cfg.removal_fraction = 0.03;
        world = sim::generate_world(cfg);
        log = crawl::run_crawls(world, crawl::daily_schedule());
        auto periods = core::default_periods(0, log.schedule.followup_at + 1);
        removed = infer::detect_removed(log, periods);
        survivors = crawl::survivor_series(log, core::default_step_grid());
        index = metrics::build_estimators(survivors, 5000.0, core::default_step_grid());
        for (const auto& r : removed.records) lifetimes.push_back(r.lifetime_lb);
    }
};

const Fixture& fixture() {
    static Fixture f;
    return f;
}

bool same_estimator_index(const metrics::EstimatorIndex& a, const metrics::EstimatorIndex& b) {
    if (a.global_count[0] != b.global_count[0] || a.global_count[1] != b.global_count[1])
        return false;
    if (a.global_sums[0] != b.global_sums[0] || a.global_sums[1] != b.global_sums[1])
        return false;
    if (a.pages.size() != b.pages.size()) return false;
    for (const auto& [page, agg] : a.pages) {
        auto it = b.pages.find(page);
        if (it == b.pages.end()) return false;
        for (int cls = 0; cls < 2; ++cls) {
            if (agg.count[cls] != it->second.count[cls]) return false;
            if (agg.sums[cls] != it->second.sums[cls]) return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("accrual share kernel matches its serial reference") {
    const auto& f = fixture();
    for (core::DurationMin age : {0, 60, 720, 1440, 8640, 43200}) {
        auto par = sim::accrued_share_at(f.world, age);
        auto ser = sim::accrued_share_at_serial(f.world, age);
        CHECK(par.accrued == ser.accrued);
        CHECK(par.potential == ser.potential);
    }
}

TEST_CASE("reach kernel matches its serial reference") {
    const auto& f = fixture();
    for (bool viral : {false, true}) {
        for (core::DurationMin age : {360, 1440, 4320}) {
            auto par = sim::reach_within(f.world, 0.8, age, 5000, viral);
            auto ser = sim::reach_within_serial(f.world, 0.8, age, 5000, viral);
            CHECK(par.reached == ser.reached);
            CHECK(par.eligible == ser.eligible);
        }
    }
}

TEST_CASE("estimator build matches its serial reference") {
    const auto& f = fixture();
    auto ser = metrics::build_estimators_serial(f.survivors, 5000.0, core::default_step_grid());
    CHECK(same_estimator_index(f.index, ser));

    core::set_thread_count(1);
    auto forced_serial = metrics::build_estimators(f.survivors, 5000.0, core::default_step_grid());
    core::set_thread_count(0);
    CHECK(same_estimator_index(f.index, forced_serial));
}

TEST_CASE("prevention batch matches its serial reference") {
    const auto& f = fixture();
    REQUIRE(!f.removed.records.empty());
    auto par = metrics::prevented_engagement_batch(f.removed.records, f.index);
    auto ser = metrics::prevented_engagement_batch_serial(f.removed.records, f.index);
    REQUIRE(par.size() == ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
        CHECK(par[i].post_id == ser[i].post_id);
        CHECK(par[i].observed == ser[i].observed);
        CHECK(par[i].prevented == ser[i].prevented);
        CHECK(par[i].potential == ser[i].potential);
        CHECK(par[i].prevention_rate == ser[i].prevention_rate);
        CHECK(par[i].viral == ser[i].viral);
        CHECK(par[i].from_page_estimator == ser[i].from_page_estimator);
        CHECK(par[i].estimator_support == ser[i].estimator_support);
    }
}

TEST_CASE("validation report is identical for any thread count") {
    const auto& f = fixture();
    REQUIRE(!f.lifetimes.empty());
    auto full = validation::validate_estimators(f.survivors, f.index, f.lifetimes, 2000, 9);
    core::set_thread_count(1);
    auto one = validation::validate_estimators(f.survivors, f.index, f.lifetimes, 2000, 9);
    core::set_thread_count(2);
    auto two = validation::validate_estimators(f.survivors, f.index, f.lifetimes, 2000, 9);
    core::set_thread_count(0);

    for (const auto* r : {&one, &two}) {
        CHECK(full.n_samples == r->n_samples);
        CHECK(full.non_viral.count == r->non_viral.count);
        CHECK(full.non_viral.accuracy_mean == r->non_viral.accuracy_mean);
        CHECK(full.non_viral.net_error == r->non_viral.net_error);
        CHECK(full.non_viral.sum_predicted == r->non_viral.sum_predicted);
        CHECK(full.viral.count == r->viral.count);
        CHECK(full.viral.accuracy_mean == r->viral.accuracy_mean);
        CHECK(full.viral.net_error == r->viral.net_error);
        CHECK(full.viral.sum_predicted == r->viral.sum_predicted);
    }
}

TEST_CASE("thread count setting round trips") {
    core::set_thread_count(3);
    CHECK(core::thread_count() >= 1);
    core::set_thread_count(1);
    CHECK(!core::parallel_enabled());
    core::set_thread_count(-5); // negatives fall back to the library default
    CHECK(core::thread_count() >= 1);
    core::set_thread_count(0);
}
