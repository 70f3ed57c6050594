#include "modsim/metrics/estimator.hpp"

#include <algorithm>
#include <stdexcept>

#include "modsim/core/parallel.hpp"

namespace modsim::metrics {

namespace {

void check_input(const std::vector<crawl::AlignedSeries>& series, const core::StepGrid& grid) {
    core::validate_grid(grid);
    if (series.empty()) {
        throw std::invalid_argument("cannot build estimators without surviving posts");
    }
    for (const auto& s : series) {
        if (s.totals.size() != grid.size()) {
            throw std::invalid_argument("series length does not match the step grid");
        }
    }
}

EstimatorIndex make_index(double threshold, const core::StepGrid& grid, int min_viral_support) {
    EstimatorIndex index;
    index.grid = grid;
    index.threshold = threshold;
    index.min_viral_support = min_viral_support;
    index.global_sums[0].assign(grid.size(), 0);
    index.global_sums[1].assign(grid.size(), 0);
    return index;
}

void add_series(EstimatorIndex::PageAggregate& agg, const crawl::AlignedSeries& s, int cls,
                std::size_t steps) {
    if (agg.sums[cls].empty()) agg.sums[cls].assign(steps, 0);
    for (std::size_t j = 0; j < steps; ++j) agg.sums[cls][j] += s.totals[j];
    ++agg.count[cls];
}

} // namespace

EstimatorIndex build_estimators_serial(const std::vector<crawl::AlignedSeries>& series,
                                       double threshold, const core::StepGrid& grid,
                                       int min_viral_support) {
    check_input(series, grid);
    EstimatorIndex index = make_index(threshold, grid, min_viral_support);
    const std::size_t steps = grid.size();
    for (const auto& s : series) {
        const int cls = index.viral_class(s.totals.back()) ? 1 : 0;
        add_series(index.pages[s.page_id], s, cls, steps);
        for (std::size_t j = 0; j < steps; ++j) index.global_sums[cls][j] += s.totals[j];
        ++index.global_count[cls];
    }
    return index;
}

EstimatorIndex build_estimators(const std::vector<crawl::AlignedSeries>& series,
                                double threshold, const core::StepGrid& grid,
                                int min_viral_support) {
    check_input(series, grid);
    EstimatorIndex index = make_index(threshold, grid, min_viral_support);
    const std::size_t steps = grid.size();

    // Group by page serially (cheap), aggregate pages in parallel (the hot
    // part), then fold page sums into the global curve; integer sums make
    // the outcome independent of the thread count.
    std::vector<std::uint64_t> page_ids;
    std::unordered_map<std::uint64_t, std::size_t> slot;
    std::vector<std::vector<const crawl::AlignedSeries*>> grouped;
    for (const auto& s : series) {
        auto [it, inserted] = slot.emplace(s.page_id, page_ids.size());
        if (inserted) {
            page_ids.push_back(s.page_id);
            grouped.emplace_back();
        }
        grouped[it->second].push_back(&s);
    }

    std::vector<EstimatorIndex::PageAggregate> aggs(page_ids.size());
    core::parallel_for(static_cast<std::int64_t>(page_ids.size()), [&](std::int64_t i) {
        for (const crawl::AlignedSeries* s : grouped[i]) {
            const int cls = index.viral_class(s->totals.back()) ? 1 : 0;
            add_series(aggs[i], *s, cls, steps);
        }
    });

    for (std::size_t i = 0; i < page_ids.size(); ++i) {
        for (int cls = 0; cls < 2; ++cls) {
            if (aggs[i].count[cls] == 0) continue;
            for (std::size_t j = 0; j < steps; ++j) {
                index.global_sums[cls][j] += aggs[i].sums[cls][j];
            }
            index.global_count[cls] += aggs[i].count[cls];
        }
        index.pages.emplace(page_ids[i], std::move(aggs[i]));
    }
    return index;
}

namespace {

bool page_curve(const EstimatorIndex& index, std::uint64_t page_id, int cls,
                const crawl::AlignedSeries* exclude, std::int64_t min_count,
                ResolvedEstimator& out) {
    auto it = index.pages.find(page_id);
    if (it == index.pages.end()) return false;
    const auto& agg = it->second;
    std::int64_t count = agg.count[cls];
    const bool excluded = exclude != nullptr && exclude->page_id == page_id &&
                          (index.viral_class(exclude->totals.back()) ? 1 : 0) == cls;
    if (excluded) --count;
    if (count < min_count) return false;
    const std::size_t steps = index.grid.size();
    out.mean_at_step.resize(steps);
    for (std::size_t j = 0; j < steps; ++j) {
        std::int64_t sum = agg.sums[cls][j];
        if (excluded) sum -= exclude->totals[j];
        out.mean_at_step[j] = static_cast<double>(sum) / static_cast<double>(count);
    }
    out.support = count;
    out.from_page = true;
    out.viral = cls == 1;
    return true;
}

bool global_curve(const EstimatorIndex& index, int cls, ResolvedEstimator& out) {
    if (index.global_count[cls] == 0) return false;
    const std::size_t steps = index.grid.size();
    out.mean_at_step.resize(steps);
    for (std::size_t j = 0; j < steps; ++j) {
        out.mean_at_step[j] = static_cast<double>(index.global_sums[cls][j]) /
                              static_cast<double>(index.global_count[cls]);
    }
    out.support = index.global_count[cls];
    out.from_page = false;
    out.viral = cls == 1;
    return true;
}

} // namespace

ResolvedEstimator resolve_estimator(const EstimatorIndex& index, std::uint64_t page_id,
                                    bool viral, const crawl::AlignedSeries* exclude) {
    ResolvedEstimator out;
    const int cls = viral ? 1 : 0;
    const std::int64_t min_count = viral ? index.min_viral_support + 1 : 1;
    if (page_curve(index, page_id, cls, exclude, min_count, out)) return out;
    if (global_curve(index, cls, out)) return out;
    if (global_curve(index, 1 - cls, out)) return out;
    throw std::runtime_error("no estimator available for page " + std::to_string(page_id));
}

} // namespace modsim::metrics
