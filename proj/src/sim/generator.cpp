#include "modsim/sim/generator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "modsim/core/rng.hpp"

namespace modsim::sim {

namespace {

constexpr std::uint64_t kSaltPage = 0xA1;
constexpr std::uint64_t kSaltPost = 0xB2;
constexpr std::uint64_t kSaltPageDeletion = 0xC3;
constexpr std::uint64_t kSaltRetro = 0xD4;

core::Rng substream(std::uint64_t seed, std::uint64_t salt, std::uint64_t idx) {
    return core::Rng(core::mix_seed(core::mix_seed(seed, salt), idx));
}

double truncated_lognormal(core::Rng& rng, const TruncatedLogNormal& d) {
    const double mu = std::log(d.median_min);
    for (int i = 0; i < 100000; ++i) {
        const double v = std::exp(rng.normal(mu, d.log_sigma));
        if (v >= d.lo_min && v <= d.hi_min) return v;
    }
    throw std::runtime_error("truncated lognormal bounds reject everything");
}

int draw_categorical(core::Rng& rng, const double* weights, int n, double total) {
    double u = rng.uniform01() * total;
    for (int i = 0; i < n; ++i) {
        u -= weights[i];
        if (u < 0) return i;
    }
    return n - 1;
}

} // namespace

void validate_config(const ScenarioConfig& cfg) {
    if (cfg.window_end <= cfg.window_start) {
        throw std::invalid_argument("window_end must exceed window_start");
    }
    if (cfg.n_pages == 0) throw std::invalid_argument("n_pages must be positive");
    if (cfg.removal_fraction < 0 || cfg.removal_fraction > 0.5) {
        throw std::invalid_argument("removal_fraction out of range");
    }
    if (cfg.viral_mix_prob < 0 || cfg.viral_mix_prob > 1) {
        throw std::invalid_argument("viral_mix_prob out of range");
    }
    const double wsum = cfg.delay_quick_weight + cfg.delay_slow_weight;
    if (cfg.delay_quick_weight < 0 || cfg.delay_slow_weight < 0 || wsum > 1.0) {
        throw std::invalid_argument("delay mixture weights must be a sub-distribution");
    }
    double psum = 0;
    for (double w : cfg.partisan_weights) {
        if (w < 0) throw std::invalid_argument("negative partisan weight");
        psum += w;
    }
    if (psum <= 0) throw std::invalid_argument("partisan weights sum to zero");
    if (cfg.mode != ScenarioMode::Baseline) {
        if (cfg.policy_change_at <= cfg.window_start || cfg.policy_change_at >= cfg.window_end) {
            throw std::invalid_argument("policy_change_at must fall inside the window");
        }
    }
    if (cfg.page_deletion_count > cfg.n_pages) {
        throw std::invalid_argument("page_deletion_count exceeds n_pages");
    }
    if (cfg.page_deletion_count > 0 &&
        (cfg.page_deletion_at <= cfg.window_start)) {
        throw std::invalid_argument("page_deletion_at must follow window_start");
    }
}

World generate_world(const ScenarioConfig& cfg) {
    validate_config(cfg);
    World world;
    world.config = cfg;

    double partisan_total = 0;
    for (double w : cfg.partisan_weights) partisan_total += w;

    // Expected share of posts coming from misinformation pages; used to keep
    // the population removal fraction at removal_fraction while targeting
    // misinformation pages more aggressively.
    double misinfo_weight = 0;
    for (int b = 0; b < core::kPartisanshipBuckets; ++b) {
        misinfo_weight += cfg.partisan_weights[b] / partisan_total * cfg.misinfo_prob[b];
    }
    const double misinfo_norm =
        1.0 - misinfo_weight + misinfo_weight * cfg.misinfo_removal_multiplier;
    const double base_removal = cfg.removal_fraction / misinfo_norm;

    const double ppd_mu =
        std::log(cfg.posts_per_day_mean) - 0.5 * cfg.posts_per_day_log_sigma * cfg.posts_per_day_log_sigma;
    const double aud_mu = -0.5 * cfg.audience_log_sigma * cfg.audience_log_sigma;

    // Pages that disappear entirely, drawn without replacement.
    std::unordered_set<std::uint64_t> deleted_pages;
    if (cfg.page_deletion_count > 0) {
        core::Rng rng = substream(cfg.seed, kSaltPageDeletion, 0);
        while (deleted_pages.size() < cfg.page_deletion_count) {
            deleted_pages.insert(static_cast<std::uint64_t>(
                rng.uniform_int(0, static_cast<std::int64_t>(cfg.n_pages) - 1)));
        }
    }

    world.pages.resize(cfg.n_pages);
    for (std::size_t i = 0; i < cfg.n_pages; ++i) {
        core::Rng rng = substream(cfg.seed, kSaltPage, i);
        PageProfile& page = world.pages[i];
        page.page_id = i;
        page.partisanship = static_cast<core::Partisanship>(
            draw_categorical(rng, cfg.partisan_weights, core::kPartisanshipBuckets, partisan_total));
        page.misinformation = rng.uniform01() < cfg.misinfo_prob[static_cast<int>(page.partisanship)];
        page.posts_per_day = std::exp(rng.normal(ppd_mu, cfg.posts_per_day_log_sigma));
        page.audience_scale = std::exp(rng.normal(aud_mu, cfg.audience_log_sigma));
    }

    const double tau_mu = std::log(cfg.tau_median_min);
    const double tau_mu_viral = std::log(cfg.tau_median_viral_min);

    for (std::size_t i = 0; i < cfg.n_pages; ++i) {
        const PageProfile& page = world.pages[i];
        const bool page_deleted = deleted_pages.count(page.page_id) > 0;
        const SimTime publish_end =
            page_deleted ? std::min(cfg.window_end, cfg.page_deletion_at) : cfg.window_end;
        const double open_days =
            static_cast<double>(publish_end - cfg.window_start) / core::kMinutesPerDay;
        if (open_days <= 0) continue;

        core::Rng page_rng = substream(cfg.seed, kSaltPage + 1, i);
        const std::int64_t n_posts = page_rng.poisson(page.posts_per_day * open_days);

        double removal_prob = base_removal;
        if (page.misinformation) removal_prob *= cfg.misinfo_removal_multiplier;

        for (std::int64_t j = 0; j < n_posts; ++j) {
            core::Rng rng(core::mix_seed(core::mix_seed(cfg.seed, kSaltPost, i),
                                         static_cast<std::uint64_t>(j)));
            PostRecord post;
            post.page_id = page.page_id;
            post.created_at = cfg.window_start +
                              static_cast<SimTime>(rng.uniform01() *
                                                   static_cast<double>(publish_end - cfg.window_start));

            const bool viral_component = rng.uniform01() < cfg.viral_mix_prob;
            double log_e = viral_component ? rng.normal(cfg.viral_log_mean, cfg.viral_log_sigma)
                                           : rng.normal(cfg.body_log_mean, cfg.body_log_sigma);
            double scale = page.audience_scale;
            if (cfg.mode == ScenarioMode::Crisis && post.created_at >= cfg.policy_change_at) {
                scale *= cfg.engagement_scale;
            }
            post.curve.total_potential =
                std::max<std::int64_t>(0, std::llround(std::exp(log_e) * scale));
            post.curve.tau = viral_component
                                 ? std::exp(rng.normal(tau_mu_viral, cfg.tau_log_sigma_viral))
                                 : std::exp(rng.normal(tau_mu, cfg.tau_log_sigma));
            post.curve.shape_k = cfg.shape_k;
            post.split_seed = rng.next_u64();

            if (page_deleted) {
                post.removal = RemovalEvent{cfg.page_deletion_at, RemovalCause::PageDeletion};
            } else {
                double p = removal_prob;
                if (viral_component) p *= cfg.viral_removal_multiplier;
                if (rng.uniform01() < std::min(p, 1.0)) {
                    const double u = rng.uniform01();
                    double delay;
                    if (u < cfg.delay_quick_weight) {
                        delay = rng.lognormal(std::log(cfg.delay_quick_median_min),
                                              cfg.delay_quick_log_sigma);
                    } else if (u < 1.0 - cfg.delay_slow_weight) {
                        delay = truncated_lognormal(
                            rng, viral_component ? cfg.delay_fast_viral : cfg.delay_fast);
                    } else {
                        delay = rng.lognormal(std::log(cfg.delay_slow_median_min),
                                              cfg.delay_slow_log_sigma);
                    }
                    post.removal = RemovalEvent{
                        post.created_at + std::max<SimTime>(1, std::llround(delay)),
                        RemovalCause::Moderation};
                } else if (rng.uniform01() < cfg.voluntary_fraction) {
                    const double delay = rng.lognormal(std::log(cfg.voluntary_median_min),
                                                       cfg.voluntary_log_sigma);
                    post.removal = RemovalEvent{
                        post.created_at + std::max<SimTime>(1, std::llround(delay)),
                        RemovalCause::Voluntary};
                }
            }
            world.posts.push_back(post);
        }
    }

    if (cfg.mode == ScenarioMode::RetroactiveWave) {
        // Pages become retroactive targets only when they already had a
        // moderation takedown comfortably before the policy change, so every
        // late wave removal traces back to a repeat offender.
        const SimTime prior_cutoff = cfg.policy_change_at - 2 * core::kMinutesPerDay;
        std::vector<char> has_prior(cfg.n_pages, 0);
        for (const PostRecord& post : world.posts) {
            if (post.removal && post.removal->cause == RemovalCause::Moderation &&
                post.removal->at <= prior_cutoff) {
                has_prior[post.page_id] = 1;
            }
        }
        std::vector<char> flagged(cfg.n_pages, 0);
        for (std::size_t i = 0; i < cfg.n_pages; ++i) {
            if (!has_prior[i]) continue;
            core::Rng rng = substream(cfg.seed, kSaltRetro, i);
            const double bias =
                cfg.retro_partisan_bias[static_cast<int>(world.pages[i].partisanship)];
            if (rng.uniform01() < std::min(1.0, cfg.retro_page_fraction * bias)) flagged[i] = 1;
        }
        std::size_t idx = 0;
        for (PostRecord& post : world.posts) {
            const std::uint64_t salt = kSaltRetro + 1;
            core::Rng rng(core::mix_seed(core::mix_seed(cfg.seed, salt, post.page_id), idx));
            ++idx;
            if (!flagged[post.page_id] || post.removal) continue;
            if (post.created_at < cfg.policy_change_at - cfg.retro_window ||
                post.created_at >= cfg.policy_change_at) {
                continue;
            }
            if (rng.uniform01() >= cfg.retro_post_fraction) continue;
            const double jitter_raw = rng.lognormal(std::log(cfg.retro_jitter_median_min),
                                                    cfg.retro_jitter_log_sigma);
            const SimTime jitter =
                std::min<SimTime>(cfg.retro_jitter_max, std::max<SimTime>(1, std::llround(jitter_raw)));
            const SimTime at =
                std::max(cfg.policy_change_at, post.created_at + cfg.retro_min_age) + jitter;
            post.removal = RemovalEvent{at, RemovalCause::Moderation};
        }
    }

    std::sort(world.posts.begin(), world.posts.end(),
              [](const PostRecord& a, const PostRecord& b) {
                  if (a.created_at != b.created_at) return a.created_at < b.created_at;
                  if (a.page_id != b.page_id) return a.page_id < b.page_id;
                  return a.split_seed < b.split_seed;
              });
    for (std::size_t i = 0; i < world.posts.size(); ++i) {
        world.posts[i].post_id = i;
    }
    return world;
}

} // namespace modsim::sim
