#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "lgt/harness.hpp"

namespace lgt {

enum class ReportFormat { csv, json };

std::optional<ReportFormat> parse_report_format(std::string_view name);

inline constexpr std::string_view kCsvHeader =
    "run_id,policy,instance,t,layer_size,deactivated_edges,cost_delta,cumulative_cost,opt,ratio,"
    "potential_total,potential_slack";

/// One header line plus one row per step of every trace. Potential columns are
/// empty for unmonitored steps. Reals use the shortest round-trip form.
std::string to_csv(std::span<const Trace> traces);

/// {"traces": [...]} with every Trace field, pretty-printed.
std::string to_json(std::span<const Trace> traces);
std::vector<Trace> traces_from_json(std::string_view text);

/// Writes the whole report; throws IoError if `path` cannot be written.
void write_report(std::span<const Trace> traces, ReportFormat format,
                  const std::filesystem::path& path);

/// Writes `content` to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace lgt
