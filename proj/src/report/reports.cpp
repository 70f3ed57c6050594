#include "modsim/report/reports.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "modsim/core/csv.hpp"
#include "modsim/pipeline/run.hpp"

namespace modsim::report {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string i64(std::int64_t v) { return std::to_string(v); }
std::string u64(std::uint64_t v) { return std::to_string(v); }
std::string f64(double v) { return core::format_double(v); }
std::string flag(bool b) { return b ? "1" : "0"; }

void write_text_file(const std::string& path, const std::string& text) {
    fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

// JSON table cells keep their numeric type when the text parses as one.
ordered_json cell_value(const std::string& s) {
    if (auto i = core::parse_i64(s)) return *i;
    if (auto d = core::parse_f64(s)) return *d;
    return s;
}

ordered_json summary_to_json(const pipeline::PreventionSummary& s) {
    return ordered_json{{"posts", s.posts},
                        {"observed_engagement", s.observed},
                        {"prevented_engagement", s.prevented},
                        {"potential_engagement", s.potential},
                        {"aggregate_rate", s.aggregate_rate},
                        {"mean_post_rate", s.mean_post_rate}};
}

ordered_json meta_block(std::uint64_t seed) {
    return ordered_json{{"seed", seed}, {"version", core::kToolVersion}};
}

ordered_json class_report_to_json(const validation::ClassReport& c) {
    return ordered_json{{"count", c.count},
                        {"accuracy_mean", c.accuracy_mean},
                        {"net_error", c.net_error},
                        {"sum_predicted", c.sum_predicted},
                        {"sum_truth", c.sum_truth}};
}

} // namespace

std::string table_to_csv(const Table& t, std::uint64_t seed) {
    std::string out = core::file_header(seed);
    out += '\n';
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        if (c) out += ',';
        out += t.columns[c];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += row[c];
        }
        out += '\n';
    }
    return out;
}

std::string table_to_json(const Table& t, std::uint64_t seed) {
    ordered_json doc;
    doc["meta"] = meta_block(seed);
    ordered_json rows = ordered_json::array();
    for (const auto& row : t.rows) {
        ordered_json obj;
        for (std::size_t c = 0; c < row.size() && c < t.columns.size(); ++c)
            obj[t.columns[c]] = cell_value(row[c]);
        rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

void write_table(const Table& t, const std::string& dir, const std::string& format,
                 std::uint64_t seed) {
    if (format == "json") {
        write_text_file((fs::path(dir) / (t.name + ".json")).string(), table_to_json(t, seed));
    } else if (format == "csv") {
        write_text_file((fs::path(dir) / (t.name + ".csv")).string(), table_to_csv(t, seed));
    } else {
        throw std::invalid_argument("unknown output format: " + format);
    }
}

Table dataset_summary_table(const std::vector<metrics::SummaryRow>& rows) {
    Table t{"table1",
            {"subset", "posts", "total_engagement", "delayed_removals", "delayed_engagement"},
            {}};
    for (const auto& r : rows)
        t.rows.push_back(
            {r.label, i64(r.posts), i64(r.engagement), i64(r.delayed_posts),
             i64(r.delayed_engagement)});
    return t;
}

Table lifetime_cdf_table(
    const std::vector<std::pair<core::PeriodName, std::vector<metrics::CdfPoint>>>& curves) {
    Table t{"fig1", {"period", "day", "cumulative_fraction"}, {}};
    for (const auto& [period, points] : curves)
        for (const auto& p : points)
            t.rows.push_back({core::to_string(period), f64(p.day), f64(p.fraction)});
    return t;
}

Table time_to_fraction_table(const core::StepGrid& grid,
                             const std::vector<core::DurationMin>& t80_non_viral,
                             const std::vector<core::DurationMin>& t80_viral) {
    Table t{"fig2", {"viral", "offset_min", "count", "fraction"}, {}};
    const std::vector<core::DurationMin>* cls[2] = {&t80_non_viral, &t80_viral};
    for (int v = 0; v < 2; ++v) {
        std::vector<std::int64_t> counts(grid.size(), 0);
        for (auto offset : *cls[v]) {
            if (auto idx = grid.index_at_or_below(offset)) ++counts[*idx];
        }
        const double n = static_cast<double>(cls[v]->size());
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double fraction =
                n > 0.0 ? static_cast<double>(counts[j]) / n : 0.0;
            t.rows.push_back(
                {flag(v == 1), i64(grid.offsets[j]), i64(counts[j]), f64(fraction)});
        }
    }
    return t;
}

Table share_breakdown_table(const std::vector<metrics::ShareRow>& rows) {
    Table t{"fig3", {"period", "removed", "partisanship", "engagement", "share"}, {}};
    for (const auto& r : rows)
        for (int b = 0; b < core::kPartisanshipBuckets; ++b)
            t.rows.push_back({core::to_string(r.period), flag(r.removed),
                              core::to_string(static_cast<core::Partisanship>(b)),
                              i64(r.engagement[static_cast<std::size_t>(b)]),
                              f64(r.share[static_cast<std::size_t>(b)])});
    return t;
}

Table top_impacted_table(const std::vector<metrics::PageImpact>& pages) {
    Table t{"top_impacted",
            {"page_id", "removed_engagement", "total_engagement", "removed_posts",
             "removed_share"},
            {}};
    for (const auto& p : pages)
        t.rows.push_back({u64(p.page_id), i64(p.removed_engagement), i64(p.total_engagement),
                          i64(p.removed_posts), f64(p.removed_share)});
    return t;
}

Table removed_set_table(const infer::RemovedSet& removed) {
    Table t{"removed_set",
            {"post_id", "page_id", "created_at_min", "last_observed_at_min", "lifetime_lb_min",
             "reactions", "shares", "comments", "period", "delayed", "page_deletion"},
            {}};
    for (const auto& r : removed.records)
        t.rows.push_back({u64(r.post_id), u64(r.page_id), i64(r.created_at),
                          i64(r.last_observed_at), i64(r.lifetime_lb),
                          i64(r.final_counts.reactions), i64(r.final_counts.shares),
                          i64(r.final_counts.comments), core::to_string(r.period),
                          flag(r.delayed), flag(r.page_deletion)});
    return t;
}

Table prevention_table(const std::vector<metrics::PreventionResult>& results) {
    Table t{"prevention_results",
            {"post_id", "observed", "prevented", "potential", "prevention_rate", "viral",
             "from_page_estimator", "estimator_support"},
            {}};
    for (const auto& r : results)
        t.rows.push_back({u64(r.post_id), i64(r.observed), f64(r.prevented), f64(r.potential),
                          f64(r.prevention_rate), flag(r.viral), flag(r.from_page_estimator),
                          i64(r.estimator_support)});
    return t;
}

std::string metrics_json(const pipeline::AnalysisBundle& bundle) {
    ordered_json doc;
    doc["meta"] = meta_block(bundle.seed);
    doc["counts"] = ordered_json{{"posts_observed", bundle.views.size()},
                                 {"survivors", bundle.survivor_count},
                                 {"removed", bundle.removed.records.size()},
                                 {"baseline_survivors", bundle.baseline_series.size()}};
    doc["virality_threshold"] = ordered_json{{"mean", bundle.threshold.mean},
                                             {"stddev", bundle.threshold.stddev},
                                             {"threshold", bundle.threshold.threshold}};

    ordered_json prevention;
    prevention["overall"] = summary_to_json(bundle.prevention_overall);
    prevention["delayed"] = summary_to_json(bundle.prevention_delayed);
    ordered_json by_period;
    for (const auto& [period, summary] : bundle.prevention_by_period)
        by_period[core::to_string(period)] = summary_to_json(summary);
    prevention["by_period"] = std::move(by_period);
    doc["prevention"] = std::move(prevention);

    ordered_json welch = ordered_json::array();
    for (const auto& w : bundle.welch_tests) {
        ordered_json e{{"label", w.label}, {"ok", w.ok}};
        if (w.ok) {
            e["t"] = w.result.t;
            e["df"] = w.result.df;
            e["p"] = w.result.p;
        } else {
            e["note"] = w.note;
        }
        welch.push_back(std::move(e));
    }
    ordered_json median = ordered_json::array();
    for (const auto& m : bundle.median_tests) {
        ordered_json e{{"label", m.label}, {"viral", m.viral}, {"ok", m.ok}};
        if (m.ok) {
            e["chi_square"] = m.result.chi_square;
            e["p"] = m.result.p;
            e["grand_median"] = m.result.grand_median;
            e["table"] = ordered_json::array(
                {ordered_json::array({m.result.table[0][0], m.result.table[0][1]}),
                 ordered_json::array({m.result.table[1][0], m.result.table[1][1]})});
        } else {
            e["note"] = m.note;
        }
        median.push_back(std::move(e));
    }
    doc["period_stats"] =
        ordered_json{{"daily_removals_welch", std::move(welch)},
                     {"lifetime_lb_median_test", std::move(median)}};

    ordered_json rates = ordered_json::array();
    for (const auto& c : bundle.removal_rates)
        rates.push_back(ordered_json{{"partisanship", core::to_string(c.partisanship)},
                                     {"misinformation", c.misinformation},
                                     {"removed_engagement", c.removed_engagement},
                                     {"total_engagement", c.total_engagement},
                                     {"removed_posts", c.removed_posts},
                                     {"total_posts", c.total_posts},
                                     {"rate", c.rate}});
    doc["weighted_removal_rates"] = std::move(rates);

    doc["repeat_offenders"] =
        ordered_json{{"delayed_removals", bundle.delayed_removals},
                     {"delayed_from_repeat_offender_pages", bundle.delayed_from_repeat_offenders}};
    doc["warnings"] = bundle.warnings;
    return doc.dump(2) + "\n";
}

std::string validation_json(const pipeline::AnalysisBundle& bundle,
                            const pipeline::RunConfig& cfg) {
    ordered_json doc;
    doc["meta"] = meta_block(bundle.seed);
    doc["accuracy_definition"] = "1 - min(1, |predicted - truth| / max(truth, 1))";
    doc["ran"] = bundle.validation_ran;
    doc["n_samples"] = bundle.validation.n_samples;
    doc["sample_seed"] = bundle.validation.seed;
    doc["non_viral"] = class_report_to_json(bundle.validation.non_viral);
    doc["viral"] = class_report_to_json(bundle.validation.viral);
    doc["warnings"] = bundle.validation.warnings;
    doc["config"] = ordered_json::parse(pipeline::run_config_to_json(cfg));
    return doc.dump(2) + "\n";
}

void write_all_reports(const pipeline::AnalysisBundle& bundle, const pipeline::RunConfig& cfg,
                       const std::string& dir) {
    const std::uint64_t seed = bundle.seed;
    write_table(removed_set_table(bundle.removed), dir, cfg.format, seed);
    write_table(prevention_table(bundle.prevention), dir, cfg.format, seed);
    write_table(dataset_summary_table(bundle.table1), dir, cfg.format, seed);
    write_table(lifetime_cdf_table(bundle.lifetime_cdfs), dir, cfg.format, seed);
    write_table(time_to_fraction_table(bundle.grid, bundle.t80_non_viral, bundle.t80_viral), dir,
                cfg.format, seed);
    write_table(share_breakdown_table(bundle.shares), dir, cfg.format, seed);
    write_table(top_impacted_table(bundle.top_impacted), dir, cfg.format, seed);
    write_text_file((fs::path(dir) / "metrics.json").string(), metrics_json(bundle));
    write_text_file((fs::path(dir) / "validation_report.json").string(),
                    validation_json(bundle, cfg));
}

} // namespace modsim::report
