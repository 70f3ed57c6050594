#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace modsim::core {

constexpr const char* kToolVersion = "0.1.0";

// Comment line placed at the top of every emitted file, recording the seed
// and tool version of the run that produced it.
std::string file_header(std::uint64_t seed);

// Splits a CSV line on commas. Fields in this project never contain commas
// or quotes, so no quoting rules are applied.
std::vector<std::string_view> split_csv(std::string_view line);

std::optional<std::int64_t> parse_i64(std::string_view s);
std::optional<std::uint64_t> parse_u64(std::string_view s);
std::optional<double> parse_f64(std::string_view s);

// Doubles are emitted with enough digits to round-trip exactly.
std::string format_double(double v);

} // namespace modsim::core
