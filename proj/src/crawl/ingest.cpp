#include "modsim/crawl/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "modsim/core/csv.hpp"

namespace modsim::crawl {

namespace {

struct RawRow {
    std::size_t line = 0;
    Observation obs;
    core::SimTime created_at = 0;
    bool has_created = false;
};

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

// Key=value pairs from "# ..." comment lines; later lines win.
void parse_comment_meta(const std::string& line,
                        std::unordered_map<std::string, std::string>& meta) {
    std::istringstream in(line.substr(1));
    std::string token;
    while (in >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos || eq == 0) continue;
        meta[token.substr(0, eq)] = token.substr(eq + 1);
    }
}

std::unordered_map<std::string, std::size_t> header_index(const std::string& line) {
    std::unordered_map<std::string, std::size_t> idx;
    const auto cols = core::split_csv(line);
    for (std::size_t i = 0; i < cols.size(); ++i) idx[std::string(cols[i])] = i;
    return idx;
}

std::uint64_t need_u64(std::string_view s) {
    auto v = core::parse_u64(s);
    if (!v) throw std::runtime_error("not an unsigned integer: " + std::string(s));
    return *v;
}

std::int64_t need_i64(std::string_view s) {
    auto v = core::parse_i64(s);
    if (!v) throw std::runtime_error("not an integer: " + std::string(s));
    return *v;
}

double need_f64(std::string_view s) {
    auto v = core::parse_f64(s);
    if (!v) throw std::runtime_error("not a number: " + std::string(s));
    return *v;
}

class RowErrors {
  public:
    RowErrors(IngestReport& report, std::string file) : report_(report), file_(std::move(file)) {}
    void reject(std::size_t line, const std::string& message) {
        ++report_.rows_rejected;
        report_.errors.push_back(IngestError{file_, line, message});
    }

  private:
    IngestReport& report_;
    std::string file_;
};

bool counts_monotone(const core::EngagementCounts& prev, const core::EngagementCounts& next,
                     std::string& what) {
    if (next.reactions < prev.reactions) what = "reactions";
    else if (next.shares < prev.shares) what = "shares";
    else if (next.comments < prev.comments) what = "comments";
    else return true;
    return false;
}

} // namespace

IngestResult ingest_snapshots(const std::string& observations_path,
                              const std::string& followup_path, const std::string& pages_path,
                              double max_error_rate) {
    IngestResult result;
    IngestReport& report = result.report;

    std::unordered_set<std::uint64_t> page_ids;
    {
        RowErrors errs(report, pages_path);
        const auto lines = read_lines(pages_path);
        std::unordered_map<std::string, std::size_t> cols;
        for (std::size_t i = 0; i < lines.size(); ++i) {
            const std::string& line = lines[i];
            if (line.empty() || line[0] == '#') continue;
            if (cols.empty()) {
                cols = header_index(line);
                continue;
            }
            ++report.rows_read;
            const auto f = core::split_csv(line);
            try {
                core::PageProfile p;
                p.page_id = need_u64(f.at(cols.at("page_id")));
                p.partisanship = core::partisanship_from_string(
                    std::string(f.at(cols.at("partisanship"))));
                p.misinformation = need_i64(f.at(cols.at("misinformation"))) != 0;
                p.posts_per_day = need_f64(f.at(cols.at("posts_per_day")));
                p.audience_scale = need_f64(f.at(cols.at("audience_scale")));
                if (!page_ids.insert(p.page_id).second) {
                    errs.reject(i + 1, "duplicate page_id");
                    continue;
                }
                result.pages.push_back(p);
            } catch (const std::exception& e) {
                errs.reject(i + 1, std::string("bad page row: ") + e.what());
            }
        }
        std::sort(result.pages.begin(), result.pages.end(),
                  [](const core::PageProfile& a, const core::PageProfile& b) {
                      return a.page_id < b.page_id;
                  });
    }

    std::vector<RawRow> rows;
    std::unordered_map<std::string, std::string> file_meta;
    {
        RowErrors errs(report, observations_path);
        const auto lines = read_lines(observations_path);
        std::unordered_map<std::string, std::size_t> cols;
        bool has_created_col = false;
        for (std::size_t i = 0; i < lines.size(); ++i) {
            const std::string& line = lines[i];
            if (line.empty()) continue;
            if (line[0] == '#') {
                parse_comment_meta(line, file_meta);
                continue;
            }
            if (cols.empty()) {
                cols = header_index(line);
                has_created_col = cols.count("created_at_min") > 0;
                if (!cols.count("post_id")) {
                    errs.reject(i + 1, "missing header row with post_id column");
                    cols.clear();
                }
                continue;
            }
            ++report.rows_read;
            const auto f = core::split_csv(line);
            try {
                RawRow row;
                row.line = i + 1;
                row.obs.post_id = need_u64(f.at(cols.at("post_id")));
                row.obs.page_id = need_u64(f.at(cols.at("page_id")));
                row.obs.kind = crawl_kind_from_string(std::string(f.at(cols.at("crawl_kind"))));
                row.obs.observed_at = need_i64(f.at(cols.at("observed_at_min")));
                row.obs.counts.reactions = need_i64(f.at(cols.at("reactions")));
                row.obs.counts.shares = need_i64(f.at(cols.at("shares")));
                row.obs.counts.comments = need_i64(f.at(cols.at("comments")));
                if (has_created_col) {
                    row.created_at = need_i64(f.at(cols.at("created_at_min")));
                    row.has_created = true;
                }
                if (row.obs.counts.reactions < 0 || row.obs.counts.shares < 0 ||
                    row.obs.counts.comments < 0) {
                    errs.reject(row.line, "negative engagement count");
                    continue;
                }
                if (!page_ids.count(row.obs.page_id)) {
                    errs.reject(row.line,
                                "unknown page_id " + std::to_string(row.obs.page_id));
                    continue;
                }
                rows.push_back(row);
            } catch (const std::exception& e) {
                errs.reject(i + 1, std::string("malformed row: ") + e.what());
            }
        }
    }

    std::sort(rows.begin(), rows.end(), [](const RawRow& a, const RawRow& b) {
        if (a.obs.observed_at != b.obs.observed_at) return a.obs.observed_at < b.obs.observed_at;
        if (a.obs.post_id != b.obs.post_id) return a.obs.post_id < b.obs.post_id;
        return a.line < b.line;
    });

    ObservationLog& log = result.log;
    {
        RowErrors errs(report, observations_path);
        std::unordered_map<std::uint64_t, core::EngagementCounts> last_counts;
        log.observations.reserve(rows.size());
        for (const RawRow& row : rows) {
            auto meta_it = log.post_meta.find(row.obs.post_id);
            if (meta_it == log.post_meta.end()) {
                PostMeta meta;
                meta.page_id = row.obs.page_id;
                meta.created_at = row.has_created ? row.created_at : row.obs.observed_at;
                meta_it = log.post_meta.emplace(row.obs.post_id, meta).first;
            } else {
                if (meta_it->second.page_id != row.obs.page_id) {
                    errs.reject(row.line, "page_id differs from the post's earlier rows");
                    continue;
                }
                if (row.has_created && meta_it->second.created_at != row.created_at) {
                    errs.reject(row.line, "created_at_min differs from the post's earlier rows");
                    continue;
                }
            }
            if (row.obs.observed_at < meta_it->second.created_at) {
                errs.reject(row.line, "observed before post creation");
                continue;
            }
            std::string what;
            auto prev = last_counts.find(row.obs.post_id);
            if (prev != last_counts.end() &&
                !counts_monotone(prev->second, row.obs.counts, what)) {
                errs.reject(row.line, what + " decreased for post " +
                                          std::to_string(row.obs.post_id));
                continue;
            }
            last_counts[row.obs.post_id] = row.obs.counts;
            log.observations.push_back(row.obs);
        }

        RowErrors fu_errs(report, followup_path);
        const auto lines = read_lines(followup_path);
        std::unordered_map<std::string, std::size_t> cols;
        for (std::size_t i = 0; i < lines.size(); ++i) {
            const std::string& line = lines[i];
            if (line.empty() || line[0] == '#') continue;
            if (cols.empty()) {
                cols = header_index(line);
                continue;
            }
            ++report.rows_read;
            const auto f = core::split_csv(line);
            try {
                const std::uint64_t id = need_u64(f.at(cols.at("post_id")));
                FollowupRecord rec;
                rec.present = need_i64(f.at(cols.at("present"))) != 0;
                if (rec.present) {
                    rec.counts.reactions = need_i64(f.at(cols.at("reactions")));
                    rec.counts.shares = need_i64(f.at(cols.at("shares")));
                    rec.counts.comments = need_i64(f.at(cols.at("comments")));
                }
                if (log.followup.count(id)) {
                    fu_errs.reject(i + 1, "duplicate follow-up row for post " + std::to_string(id));
                    continue;
                }
                if (!log.post_meta.count(id)) {
                    report.warnings.push_back("follow-up lists post " + std::to_string(id) +
                                              " that never appeared in any crawl");
                } else if (rec.present) {
                    std::string what;
                    auto prev = last_counts.find(id);
                    if (prev != last_counts.end() &&
                        !counts_monotone(prev->second, rec.counts, what)) {
                        fu_errs.reject(i + 1, what + " decreased at follow-up for post " +
                                                  std::to_string(id));
                        continue;
                    }
                }
                log.followup.emplace(id, rec);
            } catch (const std::exception& e) {
                fu_errs.reject(i + 1, std::string("malformed row: ") + e.what());
            }
        }
    }

    // Schedule and window context, from the export's comment header when
    // present, otherwise inferred conservatively from the data.
    {
        auto get_i64 = [&](const char* key, core::SimTime dflt) {
            auto it = file_meta.find(key);
            if (it == file_meta.end()) return dflt;
            auto v = core::parse_i64(it->second);
            return v ? *v : dflt;
        };
        core::SimTime max_obs = 0;
        core::SimTime min_created = 0, max_created = 0;
        bool any = false;
        for (const Observation& o : log.observations) {
            if (o.kind != CrawlKind::Followup) max_obs = std::max(max_obs, o.observed_at);
        }
        for (const auto& [id, meta] : log.post_meta) {
            min_created = any ? std::min(min_created, meta.created_at) : meta.created_at;
            max_created = any ? std::max(max_created, meta.created_at) : meta.created_at;
            any = true;
        }
        log.window_start = get_i64("window_start", any ? min_created : 0);
        log.window_end = get_i64("window_end", any ? max_created + 1 : 0);
        log.schedule.discovery_interval =
            get_i64("discovery_interval", log.schedule.discovery_interval);
        log.schedule.history_interval =
            get_i64("history_interval", log.schedule.history_interval);
        log.schedule.history_budget = get_i64("history_budget", log.schedule.history_budget);
        log.schedule.start_offset = get_i64("start_offset", log.schedule.start_offset);
        log.schedule.crawl_until = get_i64("crawl_until", max_obs);
        log.schedule.followup_at = get_i64("followup_at", log.schedule.crawl_until + 1);
        log.total_visits = get_i64("total_visits", 0);
    }

    if (report.rows_read > 0) {
        const double rate =
            static_cast<double>(report.rows_rejected) / static_cast<double>(report.rows_read);
        if (rate > max_error_rate) {
            throw std::runtime_error(
                "ingest aborted: " + std::to_string(report.rows_rejected) + " of " +
                std::to_string(report.rows_read) + " rows rejected (error rate " +
                std::to_string(rate) + " exceeds " + std::to_string(max_error_rate) + ")");
        }
    }
    return result;
}

} // namespace modsim::crawl
