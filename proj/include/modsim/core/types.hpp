#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace modsim::core {

// Simulation clock: minutes since the start of the observation window.
// All times and durations in the model are integer minutes.
using SimTime = std::int64_t;
using DurationMin = std::int64_t;

constexpr DurationMin kMinutesPerHour = 60;
constexpr DurationMin kMinutesPerDay = 1440;

constexpr DurationMin hours(double h) { return static_cast<DurationMin>(h * 60.0); }
constexpr DurationMin days(double d) { return static_cast<DurationMin>(d * 1440.0); }

struct EngagementCounts {
    std::int64_t reactions = 0;
    std::int64_t shares = 0;
    std::int64_t comments = 0;

    std::int64_t total() const { return reactions + shares + comments; }

    bool operator==(const EngagementCounts&) const = default;
};

enum class Partisanship : int {
    FarLeft = 0,
    SlightlyLeft = 1,
    Center = 2,
    SlightlyRight = 3,
    FarRight = 4,
};

constexpr int kPartisanshipBuckets = 5;

std::string to_string(Partisanship p);
Partisanship partisanship_from_string(const std::string& s);

struct PageProfile {
    std::uint64_t page_id = 0;
    Partisanship partisanship = Partisanship::Center;
    bool misinformation = false;
    double posts_per_day = 0.0;
    double audience_scale = 1.0;
};

} // namespace modsim::core
