#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "semsim/analysis.hpp"
#include "semsim/metrics.hpp"

namespace semsim {

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// 16 lowercase hex digits of fnv1a64(bytes).
std::string hash_hex(std::string_view bytes);

/// RFC 4180 field: quoted when it holds a comma, quote, CR or LF; quotes doubled.
std::string csv_field(std::string_view value);

/// Shortest decimal form that round-trips to the same double.
std::string format_number(double value);

/// Every CSV starts with "# config_hash=<hash>".
std::string scores_csv(const ScoreGrid& grid, std::string_view config_hash);
std::string summaries_csv(const ComparisonReport& report, std::string_view config_hash);
std::string table_scores_csv(const ComparisonReport& report, std::string_view config_hash);
std::string table_correlations_csv(const ComparisonReport& report, std::string_view config_hash);
std::string table_orders_csv(const ComparisonReport& report, std::string_view config_hash);
std::string order_matrix_csv(const ComparisonReport& report, std::string_view config_hash);
std::string report_json(const ComparisonReport& report, std::string_view config_hash);

/// Writes the report JSON and every table CSV into `out_dir`; returns the paths written.
std::vector<std::filesystem::path> write_report(const ComparisonReport& report, const std::filesystem::path& out_dir,
                                                std::string_view config_hash);

/// Writes `content` to `path`, creating parent directories. Throws Error on failure.
void write_text(const std::filesystem::path& path, std::string_view content);

}  // namespace semsim
