#include "modsim/crawl/log_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "modsim/core/csv.hpp"

namespace modsim::crawl {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

} // namespace

void write_observations_csv(const ObservationLog& log, const std::string& path,
                            std::uint64_t seed) {
    std::ofstream out = open_out(path);
    out << core::file_header(seed) << "\n";
    out << "# window_start=" << log.window_start << " window_end=" << log.window_end
        << " discovery_interval=" << log.schedule.discovery_interval
        << " history_interval=" << log.schedule.history_interval
        << " history_budget=" << log.schedule.history_budget
        << " followup_at=" << log.schedule.followup_at
        << " start_offset=" << log.schedule.start_offset
        << " crawl_until=" << log.schedule.crawl_until << " total_visits=" << log.total_visits
        << "\n";
    out << "post_id,page_id,crawl_kind,observed_at_min,reactions,shares,comments,created_at_min\n";
    char buf[192];
    for (const Observation& o : log.observations) {
        const auto& meta = log.post_meta.at(o.post_id);
        std::snprintf(buf, sizeof(buf), "%llu,%llu,%s,%lld,%lld,%lld,%lld,%lld\n",
                      static_cast<unsigned long long>(o.post_id),
                      static_cast<unsigned long long>(o.page_id),
                      to_string(o.kind).c_str(), static_cast<long long>(o.observed_at),
                      static_cast<long long>(o.counts.reactions),
                      static_cast<long long>(o.counts.shares),
                      static_cast<long long>(o.counts.comments),
                      static_cast<long long>(meta.created_at));
        out << buf;
    }
}

void write_followup_csv(const ObservationLog& log, const std::string& path, std::uint64_t seed) {
    std::ofstream out = open_out(path);
    out << core::file_header(seed) << "\n";
    out << "post_id,present,reactions,shares,comments\n";
    std::vector<std::uint64_t> ids;
    ids.reserve(log.followup.size());
    for (const auto& [id, rec] : log.followup) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    char buf[160];
    for (std::uint64_t id : ids) {
        const FollowupRecord& rec = log.followup.at(id);
        std::snprintf(buf, sizeof(buf), "%llu,%d,%lld,%lld,%lld\n",
                      static_cast<unsigned long long>(id), rec.present ? 1 : 0,
                      static_cast<long long>(rec.counts.reactions),
                      static_cast<long long>(rec.counts.shares),
                      static_cast<long long>(rec.counts.comments));
        out << buf;
    }
}

} // namespace modsim::crawl
