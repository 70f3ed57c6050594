#include "modsim/validation/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "modsim/core/parallel.hpp"

namespace modsim::validation {

std::vector<core::DurationMin> sample_cut_times(const std::vector<core::DurationMin>& lifetimes,
                                                std::size_t n, core::Rng& rng) {
    if (n == 0) return {};
    if (lifetimes.empty())
        throw std::invalid_argument("sample_cut_times: empty lifetime pool");
    std::vector<core::DurationMin> out;
    out.reserve(n);
    const auto hi = static_cast<std::int64_t>(lifetimes.size()) - 1;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(lifetimes[static_cast<std::size_t>(rng.uniform_int(0, hi))]);
    return out;
}

ValidationReport validate_estimators(const std::vector<crawl::AlignedSeries>& survivors,
                                     const metrics::EstimatorIndex& index,
                                     const std::vector<core::DurationMin>& removed_lifetimes,
                                     std::size_t n, std::uint64_t seed) {
    if (survivors.empty())
        throw std::invalid_argument("validate_estimators: no surviving posts to sample");

    ValidationReport report;
    report.seed = seed;

    std::size_t n_eff = n;
    if (n_eff > survivors.size()) {
        n_eff = survivors.size();
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "requested %zu validation samples but only %zu posts survive; using %zu",
                      n, survivors.size(), n_eff);
        report.warnings.emplace_back(buf);
    }
    report.n_samples = static_cast<std::int64_t>(n_eff);

    core::Rng rng(seed);
    std::vector<std::size_t> idx(survivors.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < n_eff; ++i) {
        auto span = static_cast<std::int64_t>(survivors.size() - 1 - i);
        auto j = i + static_cast<std::size_t>(rng.uniform_int(0, span));
        std::swap(idx[i], idx[j]);
    }
    const std::vector<core::DurationMin> cuts = sample_cut_times(removed_lifetimes, n_eff, rng);

    // Independent per-sample evaluation, then a serial fold so the report is
    // identical for any thread count.
    std::vector<double> predicted(n_eff);
    std::vector<std::int64_t> truth(n_eff);
    std::vector<unsigned char> is_viral(n_eff);
    core::parallel_for(static_cast<std::int64_t>(n_eff), [&](std::int64_t i) {
        const crawl::AlignedSeries& s = survivors[idx[static_cast<std::size_t>(i)]];
        const std::int64_t final_value = s.totals.back();
        const bool viral = index.viral_class(final_value);
        metrics::ResolvedEstimator est =
            metrics::resolve_estimator(index, s.page_id, viral, &s);

        std::int64_t observed = 0;
        double anchor = 0.0;
        if (auto step = index.grid.index_at_or_below(cuts[static_cast<std::size_t>(i)])) {
            observed = s.totals[*step];
            anchor = est.mean_at_step[*step];
        }
        const double tail = std::max(0.0, est.mean_at_step.back() - anchor);
        predicted[static_cast<std::size_t>(i)] = static_cast<double>(observed) + tail;
        truth[static_cast<std::size_t>(i)] = final_value;
        is_viral[static_cast<std::size_t>(i)] = viral ? 1 : 0;
    });

    double acc_sum[2] = {0.0, 0.0};
    double pred_sum[2] = {0.0, 0.0};
    std::int64_t truth_sum[2] = {0, 0};
    std::int64_t count[2] = {0, 0};
    for (std::size_t i = 0; i < n_eff; ++i) {
        const int c = is_viral[i];
        const double denom = static_cast<double>(std::max<std::int64_t>(truth[i], 1));
        acc_sum[c] += 1.0 - std::min(1.0, std::abs(predicted[i] - static_cast<double>(truth[i])) / denom);
        pred_sum[c] += predicted[i];
        truth_sum[c] += truth[i];
        ++count[c];
    }

    auto fill = [&](int c, ClassReport& out) {
        out.count = count[c];
        out.sum_predicted = pred_sum[c];
        out.sum_truth = truth_sum[c];
        if (count[c] > 0) out.accuracy_mean = acc_sum[c] / static_cast<double>(count[c]);
        if (truth_sum[c] > 0) {
            out.net_error = std::abs(pred_sum[c] - static_cast<double>(truth_sum[c])) /
                            static_cast<double>(truth_sum[c]);
        } else {
            out.net_error = pred_sum[c] > 0.0 ? 1.0 : 0.0;
        }
    };
    fill(0, report.non_viral);
    fill(1, report.viral);
    return report;
}

} // namespace modsim::validation
