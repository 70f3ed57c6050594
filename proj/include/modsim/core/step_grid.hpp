#pragma once

#include <optional>
#include <vector>

#include "modsim/core/types.hpp"

namespace modsim::core {

// Time-step grid for engagement series, offsets in minutes relative to the
// publication time of a post. The default grid has sub-daily steps on the
// first day and daily steps out to 30 days, which is treated as the long-run
// horizon: curves are considered fully accrued at or beyond the final offset.
struct StepGrid {
    std::vector<DurationMin> offsets;

    std::size_t size() const { return offsets.size(); }
    DurationMin first() const { return offsets.front(); }
    DurationMin final_offset() const { return offsets.back(); }

    // Index of the last offset <= age, or nullopt when age precedes the grid.
    std::optional<std::size_t> index_at_or_below(DurationMin age) const;
};

constexpr DurationMin kLongRunHorizonMin = 43200; // 30 days

StepGrid default_step_grid();

// Throws std::invalid_argument unless offsets are strictly increasing,
// positive, and span at least two entries.
void validate_grid(const StepGrid& grid);

} // namespace modsim::core
