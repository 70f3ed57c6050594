#include "modsim/crawl/simulate.hpp"

#include <algorithm>
#include <stdexcept>

namespace modsim::crawl {

CrawlSchedule daily_schedule() {
    return CrawlSchedule{};
}

CrawlSchedule hourly_schedule() {
    CrawlSchedule s;
    s.discovery_interval = core::kMinutesPerHour;
    s.history_interval = core::kMinutesPerHour;
    return s;
}

core::SimTime resolve_crawl_until(const CrawlSchedule& s, core::SimTime window_end) {
    return s.crawl_until >= 0 ? s.crawl_until : window_end + 3 * core::kMinutesPerDay;
}

void validate_schedule(const CrawlSchedule& s, core::SimTime window_end) {
    if (s.discovery_interval < 1 || s.history_interval < 1) {
        throw std::invalid_argument("crawl intervals must be at least one minute");
    }
    if (s.history_budget < 1) {
        throw std::invalid_argument("history_budget must be positive");
    }
    if (s.start_offset < 0) {
        throw std::invalid_argument("start_offset must be non-negative");
    }
    const core::SimTime until = resolve_crawl_until(s, window_end);
    if (s.followup_at <= window_end) {
        throw std::invalid_argument("followup_at must fall after the publication window");
    }
    if (s.followup_at <= until) {
        throw std::invalid_argument("followup_at must fall after the last crawl tick");
    }
}

std::string to_string(CrawlKind k) {
    switch (k) {
        case CrawlKind::Discovery: return "Discovery";
        case CrawlKind::History: return "History";
        case CrawlKind::Followup: return "Followup";
    }
    throw std::invalid_argument("bad crawl kind");
}

CrawlKind crawl_kind_from_string(const std::string& s) {
    if (s == "Discovery") return CrawlKind::Discovery;
    if (s == "History") return CrawlKind::History;
    if (s == "Followup") return CrawlKind::Followup;
    throw std::invalid_argument("unknown crawl kind: " + s);
}

namespace {

Observation snapshot(const sim::PostRecord& post, CrawlKind kind, core::SimTime t) {
    Observation o;
    o.post_id = post.post_id;
    o.page_id = post.page_id;
    o.kind = kind;
    o.observed_at = t;
    o.counts = sim::split_counts(sim::cumulative_at(post.curve, t - post.created_at),
                                 post.split_seed);
    return o;
}

// Upper bound on the number of records, so the log vector is allocated once.
std::size_t estimate_records(const sim::World& world, const CrawlSchedule& s,
                             core::SimTime t0, core::SimTime until) {
    std::vector<core::SimTime> removal_times;
    removal_times.reserve(256);
    for (const auto& p : world.posts) {
        if (p.removal) removal_times.push_back(p.removal->at);
    }
    std::sort(removal_times.begin(), removal_times.end());

    std::size_t total = 2 * world.posts.size();
    for (core::SimTime t = t0; t <= until; t += s.history_interval) {
        const auto created =
            std::upper_bound(world.posts.begin(), world.posts.end(), t,
                             [](core::SimTime v, const sim::PostRecord& p) {
                                 return v < p.created_at;
                             }) -
            world.posts.begin();
        const auto gone = std::upper_bound(removal_times.begin(), removal_times.end(), t) -
                          removal_times.begin();
        total += std::min<std::int64_t>(s.history_budget, created - gone);
    }
    return total;
}

} // namespace

ObservationLog run_crawls(const sim::World& world, const CrawlSchedule& schedule) {
    validate_schedule(schedule, world.config.window_end);
    for (std::size_t i = 1; i < world.posts.size(); ++i) {
        if (world.posts[i].created_at < world.posts[i - 1].created_at) {
            throw std::invalid_argument("world posts must be sorted by created_at");
        }
    }

    const core::SimTime until = resolve_crawl_until(schedule, world.config.window_end);
    const core::SimTime t0 = world.config.window_start + schedule.start_offset;

    ObservationLog log;
    log.schedule = schedule;
    log.schedule.crawl_until = until;
    log.window_start = world.config.window_start;
    log.window_end = world.config.window_end;
    log.observations.reserve(estimate_records(world, schedule, t0, until));
    log.post_meta.reserve(world.posts.size());
    log.followup.reserve(world.posts.size());

    std::vector<std::size_t> known; // indices into world.posts, oldest first
    known.reserve(world.posts.size());
    std::size_t next_candidate = 0;
    std::vector<Observation> batch;

    core::SimTime next_discovery = t0;
    core::SimTime next_history = t0;
    while (true) {
        core::SimTime t = until + 1;
        if (next_discovery <= until) t = std::min(t, next_discovery);
        if (next_history <= until) t = std::min(t, next_history);
        if (t > until) break;
        const bool discovery = (t == next_discovery);
        const bool history = (t == next_history);
        batch.clear();

        // History first covers only posts known from earlier ticks; posts
        // found by this tick's discovery pass are recorded once, as Discovery.
        if (history) {
            std::int64_t budget = schedule.history_budget;
            for (std::size_t r = known.size(); r > 0 && budget > 0; --r) {
                const sim::PostRecord& post = world.posts[known[r - 1]];
                ++log.total_visits;
                if (!post.exists_at(t)) continue; // gone: no record, budget kept
                batch.push_back(snapshot(post, CrawlKind::History, t));
                --budget;
            }
        }
        if (discovery) {
            while (next_candidate < world.posts.size() &&
                   world.posts[next_candidate].created_at <= t) {
                const sim::PostRecord& post = world.posts[next_candidate];
                if (post.exists_at(t)) {
                    ++log.total_visits;
                    known.push_back(next_candidate);
                    log.post_meta.emplace(post.post_id, PostMeta{post.page_id, post.created_at});
                    batch.push_back(snapshot(post, CrawlKind::Discovery, t));
                }
                ++next_candidate;
            }
        }

        std::sort(batch.begin(), batch.end(),
                  [](const Observation& a, const Observation& b) { return a.post_id < b.post_id; });
        log.observations.insert(log.observations.end(), batch.begin(), batch.end());

        if (discovery) next_discovery += schedule.discovery_interval;
        if (history) next_history += schedule.history_interval;
    }

    batch.clear();
    for (std::size_t idx : known) {
        const sim::PostRecord& post = world.posts[idx];
        ++log.total_visits;
        FollowupRecord rec;
        rec.present = post.exists_at(schedule.followup_at);
        if (rec.present) {
            Observation o = snapshot(post, CrawlKind::Followup, schedule.followup_at);
            rec.counts = o.counts;
            batch.push_back(o);
        }
        log.followup.emplace(post.post_id, rec);
    }
    std::sort(batch.begin(), batch.end(),
              [](const Observation& a, const Observation& b) { return a.post_id < b.post_id; });
    log.observations.insert(log.observations.end(), batch.begin(), batch.end());
    return log;
}

} // namespace modsim::crawl
