#include "modsim/sim/world.hpp"

#include <cmath>
#include <stdexcept>

#include "modsim/core/rng.hpp"

namespace modsim::sim {

std::int64_t cumulative_at(const AccrualCurve& curve, DurationMin age, DurationMin horizon) {
    if (age <= 0 || curve.total_potential <= 0) return 0;
    if (age >= horizon) return curve.total_potential;
    // F(t) = 1 / (1 + (t/tau)^-k)
    const double ratio = static_cast<double>(age) / curve.tau;
    const double f = 1.0 / (1.0 + std::pow(ratio, -curve.shape_k));
    const double v = std::floor(static_cast<double>(curve.total_potential) * f);
    if (v >= static_cast<double>(curve.total_potential)) return curve.total_potential;
    return static_cast<std::int64_t>(v);
}

EngagementCounts split_counts(std::int64_t value, std::uint64_t split_seed) {
    if (value < 0) throw std::invalid_argument("split_counts: negative value");
    // Integer-exact nested split. reactions take 3/4 of the total, then
    // shares take 3/5 of the remainder (= 0.15 overall), comments the rest.
    // The seeded offsets make the rounding direction vary per post while the
    // floor form keeps every component monotone in `value`.
    const std::uint64_t h = core::splitmix64(split_seed);
    const std::int64_t a = static_cast<std::int64_t>(h % 4);
    const std::int64_t b = static_cast<std::int64_t>(core::splitmix64(h) % 5);
    EngagementCounts c;
    c.reactions = (3 * value + a) / 4;
    const std::int64_t rest = value - c.reactions;
    c.shares = (3 * rest + b) / 5;
    c.comments = rest - c.shares;
    return c;
}

std::string to_string(RemovalCause c) {
    switch (c) {
        case RemovalCause::Moderation: return "Moderation";
        case RemovalCause::Voluntary: return "Voluntary";
        case RemovalCause::PageDeletion: return "PageDeletion";
    }
    throw std::invalid_argument("bad removal cause");
}

RemovalCause removal_cause_from_string(const std::string& s) {
    if (s == "Moderation") return RemovalCause::Moderation;
    if (s == "Voluntary") return RemovalCause::Voluntary;
    if (s == "PageDeletion") return RemovalCause::PageDeletion;
    throw std::invalid_argument("unknown removal cause: " + s);
}

std::string to_string(ScenarioMode m) {
    switch (m) {
        case ScenarioMode::Baseline: return "Baseline";
        case ScenarioMode::Crisis: return "Crisis";
        case ScenarioMode::RetroactiveWave: return "RetroactiveWave";
    }
    throw std::invalid_argument("bad scenario mode");
}

ScenarioMode scenario_mode_from_string(const std::string& s) {
    if (s == "Baseline") return ScenarioMode::Baseline;
    if (s == "Crisis") return ScenarioMode::Crisis;
    if (s == "RetroactiveWave") return ScenarioMode::RetroactiveWave;
    throw std::invalid_argument("unknown scenario mode: " + s);
}

} // namespace modsim::sim
