#pragma once

// JSON encoding shared by the CLI and the HTTP service. Every float is written
// with 17 significant digits so a parse gives back the same double.

#include <string>
#include <string_view>

#include <json.hpp>

#include "refstd/error.hpp"
#include "refstd/methods.hpp"
#include "refstd/population.hpp"

namespace refstd {

using Json = nlohmann::ordered_json;

/// "%.17g"; non-finite values become "null" in JSON and "" in CSV callers.
std::string format_double(double v);
/// Compact serialization with format_double for floats.
std::string dump_json(const Json& j);
/// Throws BadRequest on malformed input.
Json parse_json(std::string_view text);

Json to_json(const PopulationSpec& spec);
/// Strict: all nine fields, numbers only, unknown keys rejected (BadRequest).
/// Range/bound checks are left to validate().
PopulationSpec spec_from_json(const Json& j, const std::string& path = "spec");

Json to_json(const MethodResult& r);
Json to_json(const Error& e);
Json to_json(const CovarianceBounds& b);

}  // namespace refstd
