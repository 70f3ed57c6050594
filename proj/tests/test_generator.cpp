#include <doctest.h>

#include <map>
#include <set>
#include <stdexcept>

#include "modsim/sim/generator.hpp"
#include "modsim/sim/world.hpp"

using namespace modsim;

namespace {

sim::ScenarioConfig small_config(std::uint64_t seed = 7) {
    sim::ScenarioConfig cfg;
    cfg.seed = seed;
    cfg.n_pages = 150;
    cfg.window_end = core::days(33);
    return cfg;
}

bool same_posts(const sim::World& a, const sim::World& b) {
    if (a.posts.size() != b.posts.size()) return false;
    for (std::size_t i = 0; i < a.posts.size(); ++i) {
        const auto& p = a.posts[i];
        const auto& q = b.posts[i];
        if (p.post_id != q.post_id || p.page_id != q.page_id || p.created_at != q.created_at ||
            p.curve.total_potential != q.curve.total_potential || p.curve.tau != q.curve.tau ||
            p.split_seed != q.split_seed || p.removal.has_value() != q.removal.has_value()) {
            return false;
        }
        if (p.removal && (p.removal->at != q.removal->at || p.removal->cause != q.removal->cause)) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("config validation rejects inconsistent setups") {
    auto cfg = small_config();
    CHECK_NOTHROW(sim::validate_config(cfg));

    auto bad = cfg;
    bad.window_end = bad.window_start;
    CHECK_THROWS_AS(sim::validate_config(bad), std::invalid_argument);

    bad = cfg;
    bad.n_pages = 0;
    CHECK_THROWS_AS(sim::validate_config(bad), std::invalid_argument);

    bad = cfg;
    bad.removal_fraction = 0.9;
    CHECK_THROWS_AS(sim::validate_config(bad), std::invalid_argument);

    bad = cfg;
    bad.viral_mix_prob = 1.5;
    CHECK_THROWS_AS(sim::validate_config(bad), std::invalid_argument);

    bad = cfg;
    bad.delay_quick_weight = 0.7;
    bad.delay_slow_weight = 0.6;
    CHECK_THROWS_AS(sim::validate_config(bad), std::invalid_argument);

    bad = cfg;
    bad.partisan_weights[2] = -0.1;
    CHECK_THROWS_AS(sim::validate_config(bad), std::invalid_argument);

    bad = cfg;
    for (double& w : bad.partisan_weights) w = 0.0;
    CHECK_THROWS_AS(sim::validate_config(bad), std::invalid_argument);

    bad = cfg;
    bad.mode = sim::ScenarioMode::RetroactiveWave;
    bad.policy_change_at = bad.window_end + 10;
    CHECK_THROWS_AS(sim::validate_config(bad), std::invalid_argument);

    bad = cfg;
    bad.page_deletion_count = bad.n_pages + 1;
    CHECK_THROWS_AS(sim::validate_config(bad), std::invalid_argument);
}

TEST_CASE("generation is deterministic in the config") {
    auto cfg = small_config(11);
    auto w1 = sim::generate_world(cfg);
    auto w2 = sim::generate_world(cfg);
    CHECK(w1.posts.size() > 10000);
    CHECK(same_posts(w1, w2));
    REQUIRE(w1.pages.size() == w2.pages.size());
    for (std::size_t i = 0; i < w1.pages.size(); ++i) {
        CHECK(w1.pages[i].partisanship == w2.pages[i].partisanship);
        CHECK(w1.pages[i].posts_per_day == w2.pages[i].posts_per_day);
    }

    auto w3 = sim::generate_world(small_config(12));
    CHECK(!same_posts(w1, w3));
}

TEST_CASE("posts are ordered, identified and inside the window") {
    auto cfg = small_config(3);
    auto w = sim::generate_world(cfg);
    for (std::size_t i = 0; i < w.posts.size(); ++i) {
        const auto& p = w.posts[i];
        CHECK(p.post_id == i);
        if (i > 0) CHECK(p.created_at >= w.posts[i - 1].created_at);
        CHECK(p.created_at >= cfg.window_start);
        CHECK(p.created_at < cfg.window_end);
        CHECK(p.page_id < cfg.n_pages);
        CHECK(p.curve.total_potential >= 0);
        CHECK(p.curve.tau > 0);
        if (p.removal) CHECK(p.removal->at >= p.created_at + 1);
    }
}

TEST_CASE("population removal fraction holds despite targeting multipliers") {
    auto cfg = small_config(5);
    cfg.removal_fraction = 0.02;
    auto w = sim::generate_world(cfg);

    std::map<std::uint64_t, bool> misinfo;
    for (const auto& pg : w.pages) misinfo[pg.page_id] = pg.misinformation;

    std::int64_t removed = 0, mis_posts = 0, mis_removed = 0, plain_posts = 0, plain_removed = 0;
    for (const auto& p : w.posts) {
        const bool rem = p.removal && p.removal->cause == sim::RemovalCause::Moderation;
        removed += rem;
        if (misinfo[p.page_id]) {
            ++mis_posts;
            mis_removed += rem;
        } else {
            ++plain_posts;
            plain_removed += rem;
        }
    }
    const double total_rate = static_cast<double>(removed) / w.posts.size();
    CHECK(total_rate == doctest::Approx(cfg.removal_fraction).epsilon(0.12));

    REQUIRE(mis_posts > 1000);
    REQUIRE(plain_posts > 1000);
    const double ratio = (static_cast<double>(mis_removed) / mis_posts) /
                         (static_cast<double>(plain_removed) / plain_posts);
    CHECK(ratio == doctest::Approx(cfg.misinfo_removal_multiplier).epsilon(0.18));
}

TEST_CASE("retroactive wave adds late removals on prior-offender pages only") {
    auto cfg = small_config(17);
    cfg.n_pages = 200;
    cfg.removal_fraction = 0.01; // plenty of prior offenders
    auto base_cfg = cfg;
    base_cfg.mode = sim::ScenarioMode::Baseline;
    cfg.mode = sim::ScenarioMode::RetroactiveWave;

    auto base = sim::generate_world(base_cfg);
    auto wave = sim::generate_world(cfg);
    REQUIRE(base.posts.size() == wave.posts.size());

    // Pages with a moderation removal comfortably before the policy change.
    std::set<std::uint64_t> prior_pages;
    for (const auto& p : base.posts) {
        if (p.removal && p.removal->cause == sim::RemovalCause::Moderation &&
            p.removal->at <= cfg.policy_change_at - 2 * core::kMinutesPerDay) {
            prior_pages.insert(p.page_id);
        }
    }

    std::int64_t added = 0;
    for (std::size_t i = 0; i < wave.posts.size(); ++i) {
        const auto& b = base.posts[i];
        const auto& v = wave.posts[i];
        REQUIRE(b.split_seed == v.split_seed);
        if (b.removal.has_value()) {
            // Pre-existing removals are untouched by the wave.
            REQUIRE(v.removal.has_value());
            CHECK(b.removal->at == v.removal->at);
            continue;
        }
        if (!v.removal) continue;
        ++added;
        CHECK(v.removal->cause == sim::RemovalCause::Moderation);
        CHECK(v.created_at >= cfg.policy_change_at - cfg.retro_window);
        CHECK(v.created_at < cfg.policy_change_at);
        CHECK(prior_pages.count(v.page_id) == 1);
        const core::SimTime earliest =
            std::max(cfg.policy_change_at, v.created_at + cfg.retro_min_age);
        CHECK(v.removal->at >= earliest + 1);
        CHECK(v.removal->at <= earliest + cfg.retro_jitter_max);
        CHECK(v.removal->at - v.created_at >= cfg.retro_min_age);
    }
    CHECK(added > 100);
}

TEST_CASE("page deletions remove whole pages at one timestamp") {
    auto cfg = small_config(23);
    cfg.n_pages = 60;
    cfg.window_end = core::days(20);
    cfg.page_deletion_count = 3;
    cfg.page_deletion_at = core::days(12);
    auto w = sim::generate_world(cfg);

    std::map<std::uint64_t, std::pair<std::int64_t, std::int64_t>> per_page; // posts, deleted
    std::set<std::uint64_t> deleted_pages;
    for (const auto& p : w.posts) {
        auto& c = per_page[p.page_id];
        ++c.first;
        if (p.removal && p.removal->cause == sim::RemovalCause::PageDeletion) {
            ++c.second;
            deleted_pages.insert(p.page_id);
            CHECK(p.removal->at == cfg.page_deletion_at);
            CHECK(p.created_at < cfg.page_deletion_at);
        }
    }
    CHECK(deleted_pages.size() == cfg.page_deletion_count);
    for (auto page : deleted_pages) {
        // Every post of a deleted page is removed by the deletion and none
        // by anything else.
        CHECK(per_page[page].second == per_page[page].first);
    }
}

TEST_CASE("crisis mode scales engagement after the policy change") {
    auto cfg = small_config(31);
    cfg.n_pages = 80;
    auto crisis_cfg = cfg;
    crisis_cfg.mode = sim::ScenarioMode::Crisis;
    crisis_cfg.engagement_scale = 3.0;

    auto base = sim::generate_world(cfg);
    auto crisis = sim::generate_world(crisis_cfg);
    REQUIRE(base.posts.size() == crisis.posts.size());

    std::int64_t after = 0;
    for (std::size_t i = 0; i < base.posts.size(); ++i) {
        const auto& b = base.posts[i];
        const auto& c = crisis.posts[i];
        REQUIRE(b.split_seed == c.split_seed);
        if (b.created_at < cfg.policy_change_at) {
            CHECK(b.curve.total_potential == c.curve.total_potential);
        } else {
            ++after;
            // Same lognormal draw scaled by 3, so only rounding can differ.
            CHECK(std::abs(c.curve.total_potential - 3 * b.curve.total_potential) <= 2);
        }
    }
    CHECK(after > 1000);
}
