#pragma once

#include <string>
#include <vector>

#include "modsim/core/types.hpp"
#include "modsim/crawl/observation.hpp"

namespace modsim::crawl {

struct IngestError {
    std::string file;
    std::size_t line = 0; // 1-based
    std::string message;
};

struct IngestReport {
    std::size_t rows_read = 0;
    std::size_t rows_rejected = 0;
    std::vector<IngestError> errors;
    std::vector<std::string> warnings;
};

struct IngestResult {
    ObservationLog log;
    std::vector<core::PageProfile> pages;
    IngestReport report;
};

// Reads snapshot exports back into an ObservationLog with the same downstream
// semantics as a simulated one. Permissive: malformed rows, unknown pages,
// unknown crawl kinds and per-post monotonicity violations are collected as
// rejected rows with line numbers instead of failing fast. Rows are merged
// into (observed_at, post_id) order regardless of input order. Throws
// std::runtime_error when the rejected-row rate exceeds max_error_rate, or
// when a file cannot be opened at all.
IngestResult ingest_snapshots(const std::string& observations_path,
                              const std::string& followup_path, const std::string& pages_path,
                              double max_error_rate = 0.1);

} // namespace modsim::crawl
