#include "modsim/sim/engagement_stats.hpp"

#include "modsim/core/parallel.hpp"

namespace modsim::sim {

AccrualShare accrued_share_at_serial(const World& world, DurationMin age) {
    AccrualShare out;
    for (const PostRecord& post : world.posts) {
        out.accrued += cumulative_at(post.curve, age);
        out.potential += post.curve.total_potential;
    }
    return out;
}

AccrualShare accrued_share_at(const World& world, DurationMin age) {
#ifdef _OPENMP
    if (core::parallel_enabled()) {
        const auto n = static_cast<std::int64_t>(world.posts.size());
        const int threads = core::thread_count();
        std::int64_t accrued = 0;
        std::int64_t potential = 0;
#pragma omp parallel for schedule(static) num_threads(threads) reduction(+ : accrued, potential)
        for (std::int64_t i = 0; i < n; ++i) {
            accrued += cumulative_at(world.posts[i].curve, age);
            potential += world.posts[i].curve.total_potential;
        }
        return AccrualShare{accrued, potential};
    }
#endif
    return accrued_share_at_serial(world, age);
}

namespace {

bool reaches(const PostRecord& post, double fraction, DurationMin age) {
    const std::int64_t cum = cumulative_at(post.curve, age);
    return static_cast<double>(cum) >= fraction * static_cast<double>(post.curve.total_potential);
}

} // namespace

ReachShare reach_within_serial(const World& world, double fraction, DurationMin age,
                               std::int64_t viral_threshold, bool viral) {
    ReachShare out;
    for (const PostRecord& post : world.posts) {
        if (post.curve.total_potential <= 0) continue;
        if ((post.curve.total_potential >= viral_threshold) != viral) continue;
        ++out.eligible;
        if (reaches(post, fraction, age)) ++out.reached;
    }
    return out;
}

ReachShare reach_within(const World& world, double fraction, DurationMin age,
                        std::int64_t viral_threshold, bool viral) {
#ifdef _OPENMP
    if (core::parallel_enabled()) {
        const auto n = static_cast<std::int64_t>(world.posts.size());
        const int threads = core::thread_count();
        std::int64_t reached = 0;
        std::int64_t eligible = 0;
#pragma omp parallel for schedule(static) num_threads(threads) reduction(+ : reached, eligible)
        for (std::int64_t i = 0; i < n; ++i) {
            const PostRecord& post = world.posts[i];
            if (post.curve.total_potential <= 0) continue;
            if ((post.curve.total_potential >= viral_threshold) != viral) continue;
            ++eligible;
            if (reaches(post, fraction, age)) ++reached;
        }
        return ReachShare{reached, eligible};
    }
#endif
    return reach_within_serial(world, fraction, age, viral_threshold, viral);
}

} // namespace modsim::sim
