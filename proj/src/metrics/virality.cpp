#include "modsim/metrics/virality.hpp"

#include <cmath>
#include <stdexcept>

namespace modsim::metrics {

ViralityThreshold virality_threshold(const std::vector<std::int64_t>& non_removed_totals) {
    if (non_removed_totals.empty()) {
        throw std::invalid_argument("virality threshold needs at least one non-removed post");
    }
    // Integer sums keep the result independent of summation order; squares
    // need 128 bits (2M posts at ~1e7 engagement overflow 64-bit squares).
    __int128 sum = 0;
    __int128 sum_sq = 0;
    for (std::int64_t v : non_removed_totals) {
        sum += v;
        sum_sq += static_cast<__int128>(v) * v;
    }
    const double n = static_cast<double>(non_removed_totals.size());
    ViralityThreshold out;
    out.mean = static_cast<double>(sum) / n;
    const double mean_sq = static_cast<double>(sum_sq) / n;
    const double var = mean_sq - out.mean * out.mean;
    out.stddev = var > 0 ? std::sqrt(var) : 0.0;
    out.threshold = out.mean + 3.0 * out.stddev;
    return out;
}

} // namespace modsim::metrics
