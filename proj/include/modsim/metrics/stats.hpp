#pragma once

#include <cstdint>
#include <vector>

namespace modsim::metrics {

struct TTestResult {
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;
};

// Welch's unequal-variance two-sample t test, two-sided p value via the
// Welch-Satterthwaite degrees of freedom. Each sample needs at least two
// values. When both samples have zero variance: p = 1 for equal means, p = 0
// otherwise.
TTestResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b);

struct MedianTestResult {
    double chi_square = 0.0;
    double p = 1.0;
    double grand_median = 0.0;
    // [above/at-or-below][sample]; ties count as below.
    std::int64_t table[2][2] = {{0, 0}, {0, 0}};
};

// Mood's median test: 2x2 contingency of above vs at-or-below the grand
// median, chi-square with one degree of freedom and Yates continuity
// correction. Combined samples must have at least four values. Degenerate
// tables (an empty row) give chi_square 0, p 1.
MedianTestResult median_test(const std::vector<double>& a, const std::vector<double>& b);

} // namespace modsim::metrics
