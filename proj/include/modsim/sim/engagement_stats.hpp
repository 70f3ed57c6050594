#pragma once

#include <cstdint>

#include "modsim/sim/world.hpp"

namespace modsim::sim {

struct AccrualShare {
    std::int64_t accrued = 0;
    std::int64_t potential = 0;
    double share() const { return potential > 0 ? static_cast<double>(accrued) / potential : 0.0; }
};

// Engagement delivered by `age` across every post, as a share of the summed
// long-run totals. Integer sums, so the OpenMP and serial paths agree bit for
// bit.
AccrualShare accrued_share_at(const World& world, DurationMin age);
AccrualShare accrued_share_at_serial(const World& world, DurationMin age);

struct ReachShare {
    std::int64_t reached = 0;
    std::int64_t eligible = 0;
    double share() const { return eligible > 0 ? static_cast<double>(reached) / eligible : 0.0; }
};

// Share of posts whose curve has delivered at least `fraction` of its
// long-run total by `age`. Posts with a long-run total of zero are skipped;
// `viral` selects the bucket relative to `viral_threshold`.
ReachShare reach_within(const World& world, double fraction, DurationMin age,
                        std::int64_t viral_threshold, bool viral);
ReachShare reach_within_serial(const World& world, double fraction, DurationMin age,
                               std::int64_t viral_threshold, bool viral);

} // namespace modsim::sim
