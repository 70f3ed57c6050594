#include "modsim/crawl/series.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace modsim::crawl {

namespace {

// Fills `out` (grid-sized) from one post's (age, total) pairs, ages ascending.
void fill_steps(const std::vector<std::pair<core::DurationMin, std::int64_t>>& points,
                const core::StepGrid& grid, std::int64_t followup_total,
                std::vector<std::int64_t>& out) {
    out.assign(grid.size(), 0);
    std::size_t k = 0;
    std::int64_t last = 0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        while (k < points.size() && points[k].first <= grid.offsets[j]) {
            last = points[k].second;
            ++k;
        }
        out[j] = last;
    }
    out.back() = followup_total;
}

} // namespace

std::vector<AlignedSeries> survivor_series(const ObservationLog& log, const core::StepGrid& grid) {
    core::validate_grid(grid);
    std::vector<std::uint64_t> ids;
    ids.reserve(log.followup.size());
    for (const auto& [id, rec] : log.followup) {
        if (rec.present && log.post_meta.count(id)) ids.push_back(id);
    }
    std::sort(ids.begin(), ids.end());

    std::unordered_map<std::uint64_t, std::uint32_t> rank;
    rank.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) rank.emplace(ids[i], static_cast<std::uint32_t>(i));

    // Bucket each survivor's observations; the log is time-ordered, so each
    // bucket comes out age-ascending.
    std::vector<std::uint32_t> counts(ids.size(), 0);
    for (const Observation& o : log.observations) {
        auto it = rank.find(o.post_id);
        if (it != rank.end()) ++counts[it->second];
    }
    std::vector<std::size_t> offsets(ids.size() + 1, 0);
    for (std::size_t i = 0; i < ids.size(); ++i) offsets[i + 1] = offsets[i] + counts[i];
    std::vector<std::pair<core::DurationMin, std::int64_t>> points(offsets.back());
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (const Observation& o : log.observations) {
        auto it = rank.find(o.post_id);
        if (it == rank.end()) continue;
        const auto& meta = log.post_meta.at(o.post_id);
        points[cursor[it->second]++] = {o.observed_at - meta.created_at, o.counts.total()};
    }

    std::vector<AlignedSeries> out(ids.size());
    std::vector<std::pair<core::DurationMin, std::int64_t>> scratch;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const auto& meta = log.post_meta.at(ids[i]);
        AlignedSeries& s = out[i];
        s.post_id = ids[i];
        s.page_id = meta.page_id;
        s.created_at = meta.created_at;
        scratch.assign(points.begin() + offsets[i], points.begin() + offsets[i + 1]);
        fill_steps(scratch, grid, log.followup.at(ids[i]).counts.total(), s.totals);
    }
    return out;
}

std::vector<std::int64_t> extract_time_series(const ObservationLog& log, std::uint64_t post_id,
                                              const core::StepGrid& grid) {
    core::validate_grid(grid);
    auto meta_it = log.post_meta.find(post_id);
    if (meta_it == log.post_meta.end()) {
        throw std::runtime_error("post " + std::to_string(post_id) + " was never observed");
    }
    auto fu = log.followup.find(post_id);
    if (fu == log.followup.end() || !fu->second.present) {
        throw std::runtime_error("post " + std::to_string(post_id) +
                                 " did not survive to follow-up; series unavailable");
    }
    std::vector<std::pair<core::DurationMin, std::int64_t>> points;
    for (const Observation& o : log.observations) {
        if (o.post_id == post_id) {
            points.emplace_back(o.observed_at - meta_it->second.created_at, o.counts.total());
        }
    }
    std::vector<std::int64_t> out;
    fill_steps(points, grid, fu->second.counts.total(), out);
    return out;
}

std::vector<std::int64_t> extract_time_series(const sim::World& world, std::uint64_t post_id,
                                              const core::StepGrid& grid) {
    core::validate_grid(grid);
    const sim::PostRecord* found = nullptr;
    for (const auto& p : world.posts) {
        if (p.post_id == post_id) {
            found = &p;
            break;
        }
    }
    if (!found) throw std::runtime_error("post " + std::to_string(post_id) + " does not exist");
    if (found->removal) {
        throw std::runtime_error("post " + std::to_string(post_id) +
                                 " was removed; series unavailable");
    }
    std::vector<std::int64_t> out(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        out[j] = sim::cumulative_at(found->curve, grid.offsets[j]);
    }
    return out;
}

} // namespace modsim::crawl
