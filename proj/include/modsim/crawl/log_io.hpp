#pragma once

#include <string>

#include "modsim/crawl/observation.hpp"

namespace modsim::crawl {

// observations.csv: one row per observation, ordered as in the log. Besides
// the snapshot columns it carries the post's publication time, which the
// discovery crawl captures from post metadata. Comment lines ("#") carry the
// seed/version stamp and the resolved schedule so an ingested log is
// self-describing.
void write_observations_csv(const ObservationLog& log, const std::string& path,
                            std::uint64_t seed);

// followup.csv: post_id, present flag, final counts (zero when absent).
// Ordered by post_id.
void write_followup_csv(const ObservationLog& log, const std::string& path, std::uint64_t seed);

} // namespace modsim::crawl
