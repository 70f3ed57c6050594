#include "modsim/metrics/prevention.hpp"

#include <algorithm>

#include "modsim/core/parallel.hpp"

namespace modsim::metrics {

PreventionResult prevented_engagement(const infer::RemovedPostRecord& record,
                                      const EstimatorIndex& index) {
    PreventionResult out;
    out.post_id = record.post_id;
    out.observed = record.final_counts.total();
    out.viral = index.viral_class(out.observed);

    ResolvedEstimator est = resolve_estimator(index, record.page_id, out.viral);
    out.from_page_estimator = est.from_page;
    out.estimator_support = est.support;

    double anchor = 0.0;
    if (auto s = index.grid.index_at_or_below(record.lifetime_lb)) {
        anchor = est.mean_at_step[*s];
    }
    out.prevented = std::max(0.0, est.mean_at_step.back() - anchor);
    out.potential = static_cast<double>(out.observed) + out.prevented;
    out.prevention_rate = out.potential > 0.0 ? out.prevented / out.potential : 0.0;
    return out;
}

std::vector<PreventionResult> prevented_engagement_batch_serial(
    const std::vector<infer::RemovedPostRecord>& records, const EstimatorIndex& index) {
    std::vector<PreventionResult> out(records.size());
    for (std::size_t i = 0; i < records.size(); ++i)
        out[i] = prevented_engagement(records[i], index);
    return out;
}

std::vector<PreventionResult> prevented_engagement_batch(
    const std::vector<infer::RemovedPostRecord>& records, const EstimatorIndex& index) {
    std::vector<PreventionResult> out(records.size());
    core::parallel_for(records.size(), [&](std::size_t i) {
        out[i] = prevented_engagement(records[i], index);
    });
    return out;
}

} // namespace modsim::metrics
