#pragma once

#include <cstdint>
#include <vector>

namespace modsim::metrics {

struct ViralityThreshold {
    double mean = 0.0;
    double stddev = 0.0; // population standard deviation
    double threshold = 0.0; // mean + 3 * stddev
};

// Computed over the long-run totals of non-removed posts only; the caller
// supplies that subset. Throws std::invalid_argument on empty input.
ViralityThreshold virality_threshold(const std::vector<std::int64_t>& non_removed_totals);

} // namespace modsim::metrics
