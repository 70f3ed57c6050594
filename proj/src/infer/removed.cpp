#include "modsim/infer/removed.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>
#include <unordered_set>

namespace modsim::infer {

RemovedSet detect_removed(const crawl::ObservationLog& log, const core::PeriodSet& periods,
                          const InferOptions& options) {
    periods.validate();
    RemovedSet out;

    // Last observation per post; the log is time-ordered, so later rows win.
    std::unordered_map<std::uint64_t, const crawl::Observation*> last_obs;
    last_obs.reserve(log.post_meta.size());
    for (const crawl::Observation& o : log.observations) {
        last_obs[o.post_id] = &o;
    }

    std::unordered_map<std::uint64_t, std::int64_t> known_per_page;
    std::vector<std::uint64_t> meta_ids;
    meta_ids.reserve(log.post_meta.size());
    for (const auto& [id, meta] : log.post_meta) {
        meta_ids.push_back(id);
        ++known_per_page[meta.page_id];
    }
    std::sort(meta_ids.begin(), meta_ids.end());

    for (std::uint64_t id : meta_ids) {
        const crawl::PostMeta& meta = log.post_meta.at(id);
        auto fu = log.followup.find(id);
        if (fu == log.followup.end()) {
            out.warnings.push_back("post " + std::to_string(id) +
                                   " has crawl observations but no follow-up record");
            continue;
        }
        auto lo = last_obs.find(id);
        if (lo == last_obs.end()) {
            if (fu->second.present) {
                out.warnings.push_back("post " + std::to_string(id) +
                                       " is present at follow-up but was never crawled");
            }
            continue;
        }
        if (fu->second.present) continue;

        RemovedPostRecord rec;
        rec.post_id = id;
        rec.page_id = meta.page_id;
        rec.created_at = meta.created_at;
        rec.last_observed_at = lo->second->observed_at;
        rec.lifetime_lb = rec.last_observed_at - rec.created_at;
        rec.final_counts = lo->second->counts;
        rec.delayed = rec.lifetime_lb > kDelayedThresholdMin;
        out.records.push_back(rec);
    }

    const auto deleted_pages =
        detect_page_deletions(out.records, known_per_page, options.min_page_deletion_posts,
                              log.schedule.history_interval);
    std::unordered_set<std::uint64_t> deleted(deleted_pages.begin(), deleted_pages.end());

    for (std::size_t i = 0; i < out.records.size(); ++i) {
        RemovedPostRecord& rec = out.records[i];
        if (deleted.count(rec.page_id)) {
            rec.page_deletion = true;
            rec.period = core::PeriodName::RemovedPages;
        } else {
            const core::SimTime key = options.period_key == PeriodKey::Created
                                          ? rec.created_at
                                          : rec.last_observed_at;
            rec.period = periods.period_of(key);
        }
        out.partition[rec.period].push_back(i);
    }
    return out;
}

std::vector<std::uint64_t> detect_page_deletions(
    const std::vector<RemovedPostRecord>& records,
    const std::unordered_map<std::uint64_t, std::int64_t>& known_posts_per_page,
    std::size_t min_posts, core::DurationMin history_interval) {
    struct PageSpan {
        std::int64_t removed = 0;
        core::SimTime first = std::numeric_limits<core::SimTime>::max();
        core::SimTime last = std::numeric_limits<core::SimTime>::min();
    };
    std::unordered_map<std::uint64_t, PageSpan> spans;
    for (const RemovedPostRecord& rec : records) {
        PageSpan& span = spans[rec.page_id];
        ++span.removed;
        span.first = std::min(span.first, rec.last_observed_at);
        span.last = std::max(span.last, rec.last_observed_at);
    }
    std::vector<std::uint64_t> out;
    for (const auto& [page_id, span] : spans) {
        if (span.removed < static_cast<std::int64_t>(min_posts)) continue;
        auto known = known_posts_per_page.find(page_id);
        if (known == known_posts_per_page.end() || known->second != span.removed) continue;
        if (span.last - span.first > history_interval) continue;
        out.push_back(page_id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool repeat_offender(const RemovedSet& removed, std::uint64_t page_id, core::SimTime as_of) {
    for (const RemovedPostRecord& rec : removed.records) {
        if (rec.page_id == page_id && rec.last_observed_at < as_of) return true;
    }
    return false;
}

std::vector<bool> repeat_offender_flags(const RemovedSet& removed) {
    std::unordered_map<std::uint64_t, core::SimTime> earliest;
    for (const RemovedPostRecord& rec : removed.records) {
        auto it = earliest.find(rec.page_id);
        if (it == earliest.end() || rec.last_observed_at < it->second) {
            earliest[rec.page_id] = rec.last_observed_at;
        }
    }
    std::vector<bool> flags(removed.records.size());
    for (std::size_t i = 0; i < removed.records.size(); ++i) {
        flags[i] = removed.records[i].last_observed_at > earliest.at(removed.records[i].page_id);
    }
    return flags;
}

} // namespace modsim::infer
