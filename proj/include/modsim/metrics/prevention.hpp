#pragma once

#include <cstdint>
#include <vector>

#include "modsim/infer/removed.hpp"
#include "modsim/metrics/estimator.hpp"

namespace modsim::metrics {

struct PreventionResult {
    std::uint64_t post_id = 0;
    std::int64_t observed = 0;  // engagement accrued before removal
    double prevented = 0.0;     // estimator tail after the last observation
    double potential = 0.0;     // observed + prevented
    double prevention_rate = 0.0;
    bool viral = false;         // classified by observed engagement
    bool from_page_estimator = false;
    std::int64_t estimator_support = 0;
};

// The anchor is the last grid offset at or below lifetime_lb (curve value 0
// when the lifetime undercuts the first offset); prevented is the estimator
// mean at the final step minus the mean at the anchor, clamped at 0.
PreventionResult prevented_engagement(const infer::RemovedPostRecord& record,
                                      const EstimatorIndex& index);

// One result per record, same order. The parallel form gives bitwise the
// same results as the serial one (samples are independent).
std::vector<PreventionResult> prevented_engagement_batch(
    const std::vector<infer::RemovedPostRecord>& records, const EstimatorIndex& index);
std::vector<PreventionResult> prevented_engagement_batch_serial(
    const std::vector<infer::RemovedPostRecord>& records, const EstimatorIndex& index);

} // namespace modsim::metrics
