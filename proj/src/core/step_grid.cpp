#include "modsim/core/step_grid.hpp"

#include <algorithm>
#include <stdexcept>

namespace modsim::core {

std::optional<std::size_t> StepGrid::index_at_or_below(DurationMin age) const {
    if (offsets.empty() || age < offsets.front()) return std::nullopt;
    auto it = std::upper_bound(offsets.begin(), offsets.end(), age);
    return static_cast<std::size_t>(it - offsets.begin()) - 1;
}

StepGrid default_step_grid() {
    StepGrid g;
    g.offsets = {15, 30, 60, 120, 240, 480, 720, 1440};
    for (DurationMin d = 2880; d <= kLongRunHorizonMin; d += kMinutesPerDay) {
        g.offsets.push_back(d);
    }
    return g;
}

void validate_grid(const StepGrid& grid) {
    if (grid.offsets.size() < 2) {
        throw std::invalid_argument("step grid needs at least two offsets");
    }
    if (grid.offsets.front() <= 0) {
        throw std::invalid_argument("step grid offsets must be positive");
    }
    for (std::size_t i = 1; i < grid.offsets.size(); ++i) {
        if (grid.offsets[i] <= grid.offsets[i - 1]) {
            throw std::invalid_argument("step grid offsets must be strictly increasing");
        }
    }
}

} // namespace modsim::core
