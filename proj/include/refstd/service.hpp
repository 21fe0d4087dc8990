#pragma once

// Request handling shared by the HTTP server and the CLI. Handlers are pure
// functions of the request body.

#include <string>
#include <string_view>
#include <vector>

#include "refstd/error.hpp"
#include "refstd/export.hpp"
#include "refstd/json_io.hpp"
#include "refstd/lcm.hpp"
#include "refstd/sweep.hpp"

namespace refstd {

struct ServiceResponse {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

int http_status(ErrorCode code) noexcept;
ServiceResponse error_response(const Error& e);

/// IGS, CRS_A, CRS_O, DA.
std::vector<MethodId> default_methods();
/// Comma-separated tags, or "all" for every method including the LCM ones.
std::vector<MethodId> parse_method_list(std::string_view list);
EtaSource parse_eta_source(std::string_view name);
ConstraintContext parse_constraint_context(std::string_view name);

struct ComputeOutcome {
    std::vector<Json> records;
    /// Some method failed with a degenerate reference or undefined estimator.
    bool method_failed = false;
};

/// Validates the spec (throws InvalidSpec / OutOfBounds) and evaluates each
/// method; per-method failures become {"method", "error"} records.
ComputeOutcome compute_records(const PopulationSpec& spec, const std::vector<MethodId>& methods, EtaSource eta_source);

Json scenario_payload(const PopulationSpec& spec, LcmScenario scenario, double xi_model, double eps_model,
                      EtaSource eta_source);
Json bounds_payload(const PopulationSpec& spec, ConstraintContext context);
Json crossovers_payload(const std::vector<Crossover>& crossovers);
SweepAxis axis_from_json(const Json& j);

ServiceResponse handle_compute(std::string_view body);
ServiceResponse handle_sweep(std::string_view body);
ServiceResponse handle_bounds(std::string_view body);
ServiceResponse handle_crossovers(std::string_view body);
ServiceResponse handle_health();

}  // namespace refstd
