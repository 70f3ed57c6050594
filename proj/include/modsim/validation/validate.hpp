#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "modsim/core/rng.hpp"
#include "modsim/core/step_grid.hpp"
#include "modsim/crawl/series.hpp"
#include "modsim/metrics/estimator.hpp"

namespace modsim::validation {

struct ClassReport {
    std::int64_t count = 0;
    double accuracy_mean = 0.0; // mean of 1 - min(1, |pred - truth| / max(truth, 1))
    double net_error = 0.0;     // |sum pred - sum truth| / sum truth
    double sum_predicted = 0.0;
    std::int64_t sum_truth = 0;
};

struct ValidationReport {
    std::int64_t n_samples = 0;
    std::uint64_t seed = 0;
    ClassReport non_viral;
    ClassReport viral;
    std::vector<std::string> warnings;
};

// Bootstrap draws (with replacement) from the empirical lifetime pool.
// Throws std::invalid_argument on an empty pool unless n is 0.
std::vector<core::DurationMin> sample_cut_times(const std::vector<core::DurationMin>& lifetimes,
                                                std::size_t n, core::Rng& rng);

// Simulates removals on surviving posts: each sampled series is cut at a
// bootstrapped lifetime, the estimator tail is added to the observed value
// at the cut, and the prediction is compared to the post's final value.
// A sampled post's own page estimator is re-resolved without it. Samples are
// drawn without replacement; n is clamped to the population with a warning.
// Results do not depend on the thread count.
ValidationReport validate_estimators(const std::vector<crawl::AlignedSeries>& survivors,
                                     const metrics::EstimatorIndex& index,
                                     const std::vector<core::DurationMin>& removed_lifetimes,
                                     std::size_t n = 10000, std::uint64_t seed = 1);

} // namespace modsim::validation
