#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "modsim/core/step_grid.hpp"
#include "modsim/crawl/series.hpp"

namespace modsim::metrics {

// Per-step integer sums of surviving posts' aligned series, bucketed by page
// and viral class. Means are derived on lookup, so the parallel and serial
// builds agree exactly and leave-one-out reduces to subtracting one series.
struct EstimatorIndex {
    core::StepGrid grid;
    double threshold = 0.0; // long-run total at/above this is viral
    int min_viral_support = 10;

    struct PageAggregate {
        std::vector<std::int64_t> sums[2]; // [viral?][step]
        std::int64_t count[2] = {0, 0};
    };
    std::unordered_map<std::uint64_t, PageAggregate> pages;
    std::vector<std::int64_t> global_sums[2];
    std::int64_t global_count[2] = {0, 0};

    bool viral_class(std::int64_t long_run_total) const {
        return static_cast<double>(long_run_total) >= threshold;
    }
};

// Mean engagement-by-age curve chosen for a lookup, with its provenance.
struct ResolvedEstimator {
    std::vector<double> mean_at_step;
    std::int64_t support = 0;
    bool from_page = false;
    bool viral = false;
};

// Builds the index from surviving posts' series (the caller restricts these
// to the baseline window). Throws std::invalid_argument when `series` is
// empty or a series length mismatches the grid.
EstimatorIndex build_estimators(const std::vector<crawl::AlignedSeries>& series,
                                double threshold, const core::StepGrid& grid,
                                int min_viral_support = 10);
EstimatorIndex build_estimators_serial(const std::vector<crawl::AlignedSeries>& series,
                                       double threshold, const core::StepGrid& grid,
                                       int min_viral_support = 10);

// Resolves the curve for (page, class). A page-level viral curve needs more
// than min_viral_support posts, a page-level non-viral curve needs at least
// one; otherwise the global curve of the class applies, then the other
// class's global curve as a last resort. `exclude` removes one sample from
// its own page's aggregate (global curves are not re-fit). Throws
// std::runtime_error when nothing is available at all.
ResolvedEstimator resolve_estimator(const EstimatorIndex& index, std::uint64_t page_id,
                                    bool viral, const crawl::AlignedSeries* exclude = nullptr);

} // namespace modsim::metrics
