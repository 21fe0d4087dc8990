#pragma once

// Tabular (CSV) and nested (JSON) encodings of sweep results.
//
// CSV columns: axis_param, axis_value, method, se, sp, delta_se, delta_sp,
// clamped, skipped, skip_reason. Skipped cells leave se..clamped empty.

#include <string>
#include <string_view>

#include "refstd/json_io.hpp"
#include "refstd/sweep.hpp"

namespace refstd {

enum class ExportFormat { Csv, Json };

std::optional<ExportFormat> parse_export_format(std::string_view name) noexcept;

std::string export_csv(const SweepResult& result);
std::string export_json(const SweepResult& result);
std::string export_sweep(const SweepResult& result, ExportFormat format);

Json sweep_to_json(const SweepResult& result);
SweepResult sweep_from_json(const Json& j);

/// Inverse of export_json. Throws BadRequest on schema errors.
SweepResult import_json(std::string_view text);
/// Rebuilds what the CSV carries: axis parameter and grid values, method list
/// and per-cell results. The base spec and fields absent from the CSV
/// (hci_assumed, raw values) are left at their defaults. Throws BadRequest.
SweepResult import_csv(std::string_view text);

}  // namespace refstd
