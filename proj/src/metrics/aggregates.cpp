#include "modsim/metrics/aggregates.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

namespace modsim::metrics {

std::vector<PostEngagementView> engagement_views(const crawl::ObservationLog& log,
                                                 const infer::RemovedSet& removed) {
    std::vector<PostEngagementView> views;
    views.reserve(log.followup.size());
    for (const auto& rec : removed.records) {
        PostEngagementView v;
        v.post_id = rec.post_id;
        v.page_id = rec.page_id;
        v.created_at = rec.created_at;
        v.engagement = rec.final_counts.total();
        v.removed = true;
        v.removed_index = static_cast<std::ptrdiff_t>(&rec - removed.records.data());
        views.push_back(v);
    }
    for (const auto& [post_id, fr] : log.followup) {
        if (!fr.present) continue;
        auto meta = log.post_meta.find(post_id);
        if (meta == log.post_meta.end()) continue;
        PostEngagementView v;
        v.post_id = post_id;
        v.page_id = meta->second.page_id;
        v.created_at = meta->second.created_at;
        v.engagement = fr.counts.total();
        views.push_back(v);
    }
    std::sort(views.begin(), views.end(),
              [](const PostEngagementView& a, const PostEngagementView& b) {
                  return a.post_id < b.post_id;
              });
    return views;
}

std::optional<core::DurationMin> time_to_fraction(const std::vector<std::int64_t>& totals,
                                                  const core::StepGrid& grid, double fraction) {
    if (totals.size() != grid.size())
        throw std::invalid_argument("time_to_fraction: series length mismatches grid");
    if (totals.empty() || totals.back() <= 0) return std::nullopt;
    const double target = fraction * static_cast<double>(totals.back());
    for (std::size_t j = 0; j < totals.size(); ++j)
        if (static_cast<double>(totals[j]) >= target) return grid.offsets[j];
    return grid.final_offset();
}

double weighted_removal_rate(const std::vector<PostEngagementView>& category) {
    std::int64_t removed = 0, total = 0;
    for (const auto& v : category) {
        total += v.engagement;
        if (v.removed) removed += v.engagement;
    }
    if (total <= 0) return 0.0;
    return static_cast<double>(removed) / static_cast<double>(total);
}

std::vector<RemovalRateCell> removal_rates_by_category(
    const std::vector<PostEngagementView>& views, const std::vector<core::PageProfile>& pages) {
    std::unordered_map<std::uint64_t, std::size_t> cell_of_page;
    cell_of_page.reserve(pages.size());
    for (const auto& p : pages) {
        std::size_t cell = static_cast<std::size_t>(p.partisanship) * 2 +
                           (p.misinformation ? 1 : 0);
        cell_of_page.emplace(p.page_id, cell);
    }

    std::vector<RemovalRateCell> cells(core::kPartisanshipBuckets * 2);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        cells[i].partisanship = static_cast<core::Partisanship>(i / 2);
        cells[i].misinformation = (i % 2) == 1;
    }
    for (const auto& v : views) {
        auto it = cell_of_page.find(v.page_id);
        if (it == cell_of_page.end()) continue;
        RemovalRateCell& c = cells[it->second];
        c.total_engagement += v.engagement;
        ++c.total_posts;
        if (v.removed) {
            c.removed_engagement += v.engagement;
            ++c.removed_posts;
        }
    }
    for (auto& c : cells)
        if (c.total_engagement > 0)
            c.rate = static_cast<double>(c.removed_engagement) /
                     static_cast<double>(c.total_engagement);
    return cells;
}

std::vector<ShareRow> engagement_share_breakdown(const std::vector<PostEngagementView>& views,
                                                 const infer::RemovedSet& removed,
                                                 const std::vector<core::PageProfile>& pages,
                                                 const core::PeriodSet& periods) {
    std::unordered_map<std::uint64_t, int> bucket_of_page;
    bucket_of_page.reserve(pages.size());
    for (const auto& p : pages)
        bucket_of_page.emplace(p.page_id, static_cast<int>(p.partisanship));

    std::map<std::pair<int, int>, std::array<std::int64_t, core::kPartisanshipBuckets>> acc;
    for (const auto& v : views) {
        auto it = bucket_of_page.find(v.page_id);
        if (it == bucket_of_page.end()) continue;
        core::PeriodName period;
        if (v.removed) {
            period = removed.records[static_cast<std::size_t>(v.removed_index)].period;
        } else {
            period = periods.period_of(v.created_at);
        }
        auto& row = acc[{static_cast<int>(period), v.removed ? 1 : 0}];
        row[static_cast<std::size_t>(it->second)] += v.engagement;
    }

    std::vector<ShareRow> rows;
    for (const auto& [key, engagement] : acc) {
        std::int64_t total = 0;
        for (auto e : engagement) total += e;
        if (total <= 0) continue;
        ShareRow row;
        row.period = static_cast<core::PeriodName>(key.first);
        row.removed = key.second == 1;
        row.engagement = engagement;
        for (std::size_t b = 0; b < row.share.size(); ++b)
            row.share[b] = static_cast<double>(engagement[b]) / static_cast<double>(total);
        rows.push_back(row);
    }
    return rows;
}

std::vector<PageImpact> top_impacted_pages(const std::vector<PostEngagementView>& views) {
    std::unordered_map<std::uint64_t, PageImpact> by_page;
    for (const auto& v : views) {
        PageImpact& p = by_page[v.page_id];
        p.page_id = v.page_id;
        p.total_engagement += v.engagement;
        if (v.removed) {
            p.removed_engagement += v.engagement;
            ++p.removed_posts;
        }
    }
    std::vector<PageImpact> out;
    for (auto& [id, p] : by_page) {
        if (p.removed_posts == 0) continue;
        if (p.total_engagement > 0)
            p.removed_share = static_cast<double>(p.removed_engagement) /
                              static_cast<double>(p.total_engagement);
        out.push_back(p);
    }
    std::sort(out.begin(), out.end(), [](const PageImpact& a, const PageImpact& b) {
        if (a.removed_engagement != b.removed_engagement)
            return a.removed_engagement > b.removed_engagement;
        return a.page_id < b.page_id;
    });
    return out;
}

namespace {

void add_view(SummaryRow& row, const PostEngagementView& v, const infer::RemovedSet& removed) {
    ++row.posts;
    row.engagement += v.engagement;
    if (v.removed && removed.records[static_cast<std::size_t>(v.removed_index)].delayed) {
        ++row.delayed_posts;
        row.delayed_engagement += v.engagement;
    }
}

} // namespace

std::vector<SummaryRow> dataset_summary(const std::vector<PostEngagementView>& views,
                                        const infer::RemovedSet& removed) {
    std::unordered_map<std::uint64_t, bool> page_impacted;
    for (const auto& rec : removed.records) page_impacted[rec.page_id] = true;

    SummaryRow full{"full"}, removed_row{"removed"}, impacted{"impacted_publishers"},
        survivors{"non_removed"};
    for (const auto& v : views) {
        add_view(full, v, removed);
        if (v.removed) add_view(removed_row, v, removed);
        else add_view(survivors, v, removed);
        if (page_impacted.count(v.page_id)) add_view(impacted, v, removed);
    }

    std::vector<SummaryRow> rows{full, removed_row};
    for (auto period : {core::PeriodName::Baseline, core::PeriodName::Jan6,
                        core::PeriodName::Jan12, core::PeriodName::RemovedPages}) {
        SummaryRow row{"removed_" + core::to_string(period)};
        auto it = removed.partition.find(period);
        if (it != removed.partition.end()) {
            for (std::size_t idx : it->second) {
                const auto& rec = removed.records[idx];
                ++row.posts;
                row.engagement += rec.final_counts.total();
                if (rec.delayed) {
                    ++row.delayed_posts;
                    row.delayed_engagement += rec.final_counts.total();
                }
            }
        }
        rows.push_back(row);
    }
    rows.push_back(impacted);
    rows.push_back(survivors);
    return rows;
}

std::vector<double> daily_counts(const std::vector<core::SimTime>& times, core::SimTime start,
                                 core::SimTime end) {
    if (end <= start) return {};
    const std::size_t days = static_cast<std::size_t>((end - start) / core::kMinutesPerDay);
    std::vector<double> counts(days, 0.0);
    for (auto t : times) {
        if (t < start) continue;
        std::size_t d = static_cast<std::size_t>((t - start) / core::kMinutesPerDay);
        if (d < days) counts[d] += 1.0;
    }
    return counts;
}

std::vector<CdfPoint> lifetime_cdf(const std::vector<core::DurationMin>& lifetimes,
                                   double max_day, double step_day) {
    std::vector<CdfPoint> out;
    if (lifetimes.empty()) return out;
    std::vector<core::DurationMin> sorted = lifetimes;
    std::sort(sorted.begin(), sorted.end());
    const double max_lb_day = static_cast<double>(sorted.back()) / core::kMinutesPerDay;
    std::size_t steps = static_cast<std::size_t>(std::ceil(max_day / step_day));
    while (static_cast<double>(steps) * step_day < max_lb_day) ++steps;

    const double n = static_cast<double>(sorted.size());
    std::size_t covered = 0;
    for (std::size_t k = 0; k <= steps; ++k) {
        const double day = static_cast<double>(k) * step_day;
        const double cutoff = day * core::kMinutesPerDay + 1e-9;
        while (covered < sorted.size() && static_cast<double>(sorted[covered]) <= cutoff)
            ++covered;
        out.push_back({day, static_cast<double>(covered) / n});
    }
    return out;
}

} // namespace modsim::metrics
