#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "modsim/pipeline/run.hpp"

namespace modsim::report {

// Uniform tabular output: csv (default) or json (array of row objects).
// Either way the file records the seed and tool version up front.
struct Table {
    std::string name; // file stem
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

std::string table_to_csv(const Table& t, std::uint64_t seed);
std::string table_to_json(const Table& t, std::uint64_t seed);
void write_table(const Table& t, const std::string& dir, const std::string& format,
                 std::uint64_t seed);

Table dataset_summary_table(const std::vector<metrics::SummaryRow>& rows);
Table lifetime_cdf_table(
    const std::vector<std::pair<core::PeriodName, std::vector<metrics::CdfPoint>>>& curves);
Table time_to_fraction_table(const core::StepGrid& grid,
                             const std::vector<core::DurationMin>& t80_non_viral,
                             const std::vector<core::DurationMin>& t80_viral);
Table share_breakdown_table(const std::vector<metrics::ShareRow>& rows);
Table top_impacted_table(const std::vector<metrics::PageImpact>& pages);
Table removed_set_table(const infer::RemovedSet& removed);
Table prevention_table(const std::vector<metrics::PreventionResult>& results);

std::string metrics_json(const pipeline::AnalysisBundle& bundle);
std::string validation_json(const pipeline::AnalysisBundle& bundle,
                            const pipeline::RunConfig& cfg);

// Writes removed_set, prevention_results, table1, fig1..fig3, top_impacted,
// metrics.json and validation_report.json under dir.
void write_all_reports(const pipeline::AnalysisBundle& bundle, const pipeline::RunConfig& cfg,
                       const std::string& dir);

} // namespace modsim::report
