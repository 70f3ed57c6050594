#pragma once

#include <array>
#include <string>
#include <vector>

#include "modsim/core/types.hpp"

namespace modsim::core {

// Analysis buckets for removed posts. The first three are disjoint,
// contiguous time periods keyed on a post's last observation; RemovedPages is
// a cause-based bucket (posts whose whole page disappeared) that takes
// precedence over the time periods.
enum class PeriodName : int {
    Baseline = 0,
    Jan6 = 1,
    Jan12 = 2,
    RemovedPages = 3,
};

std::string to_string(PeriodName p);
PeriodName period_from_string(const std::string& s);

struct Period {
    PeriodName name;
    SimTime start; // inclusive
    SimTime end;   // exclusive
};

struct PeriodSet {
    std::vector<Period> periods; // the three time periods in order

    // Throws std::invalid_argument if the periods are not the three time
    // buckets in order, disjoint and contiguous.
    void validate() const;

    PeriodName period_of(SimTime t) const;
    const Period& get(PeriodName name) const;
};

// Baseline [0, day 21), Jan6 [day 21, day 29), Jan12 [day 29, horizon).
PeriodSet default_periods(SimTime window_start, SimTime horizon);

} // namespace modsim::core
