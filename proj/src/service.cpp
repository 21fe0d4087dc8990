#include "refstd/service.hpp"

#include <algorithm>
#include <cctype>
#include <initializer_list>

namespace refstd {

namespace {

[[noreturn]] void bad(const std::string& msg, const std::string& detail) {
    throw Error(ErrorCode::BadRequest, msg, detail);
}

Json request_object(std::string_view body, std::initializer_list<const char*> allowed) {
    Json j = parse_json(body);
    if (!j.is_object()) bad("request body must be a JSON object", "");
    for (const auto& [k, v] : j.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; })) {
            bad("unknown field " + k, k);
        }
    }
    return j;
}

std::string string_field(const Json& j, const char* key, const std::string& fallback) {
    const auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_string()) bad(std::string(key) + " must be a string", key);
    return it->get<std::string>();
}

double number_field(const Json& j, const char* key, double fallback, const std::string& path) {
    const auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number()) bad(std::string(key) + " must be a number", path + key);
    return it->get<double>();
}

PopulationSpec request_spec(const Json& j) {
    const auto it = j.find("spec");
    if (it == j.end()) bad("missing spec", "spec");
    return spec_from_json(*it, "spec");
}

std::vector<MethodId> request_methods(const Json& j) {
    const auto it = j.find("methods");
    if (it == j.end()) return default_methods();
    if (it->is_string()) return parse_method_list(it->get<std::string>());
    if (!it->is_array()) bad("methods must be an array of method tags", "methods");
    std::vector<MethodId> out;
    for (std::size_t i = 0; i < it->size(); ++i) {
        const Json& tag = (*it)[i];
        const std::string path = "methods[" + std::to_string(i) + "]";
        if (!tag.is_string()) bad("method tag must be a string", path);
        const auto m = parse_method(tag.get<std::string>());
        if (!m) bad("unknown method " + tag.get<std::string>(), path);
        out.push_back(*m);
    }
    if (out.empty()) bad("no methods requested", "methods");
    return out;
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

template <class F>
ServiceResponse guarded(F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        return error_response(e);
    }
}

Json lcm_estimate_json(const LcmEstimate& e) {
    Json j = Json::object();
    j["se"] = Json::array({e.se[0], e.se[1], e.se[2]});
    j["sp"] = Json::array({e.sp[0], e.sp[1], e.sp[2]});
    j["eta_hat"] = e.eta_hat;
    j["raw_se"] = Json::array({e.raw_se[0], e.raw_se[1], e.raw_se[2]});
    j["raw_sp"] = Json::array({e.raw_sp[0], e.raw_sp[1], e.raw_sp[2]});
    j["raw_eta"] = e.raw_eta;
    j["eta_upper_root"] = e.eta_upper_root;
    j["eta_used"] = e.eta_used;
    j["clamped"] = e.clamped;
    j["scenario"] = to_string(e.scenario);
    return j;
}

}  // namespace

int http_status(ErrorCode code) noexcept { return code == ErrorCode::OutOfBounds ? 422 : 400; }

ServiceResponse error_response(const Error& e) {
    return {http_status(e.code()), "application/json", dump_json(to_json(e))};
}

std::vector<MethodId> default_methods() { return {std::begin(kComparativeMethods), std::end(kComparativeMethods)}; }

std::vector<MethodId> parse_method_list(std::string_view list) {
    if (lower(list) == "all") return {std::begin(kAllMethods), std::end(kAllMethods)};
    std::vector<MethodId> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        std::size_t end = list.find(',', start);
        if (end == std::string_view::npos) end = list.size();
        const std::string_view tag = list.substr(start, end - start);
        if (!tag.empty()) {
            const auto m = parse_method(tag);
            if (!m) bad("unknown method " + std::string(tag), "methods");
            out.push_back(*m);
        }
        start = end + 1;
    }
    if (out.empty()) bad("no methods requested", "methods");
    return out;
}

EtaSource parse_eta_source(std::string_view name) {
    const std::string n = lower(name);
    if (n == "estimated") return EtaSource::Estimated;
    if (n == "true") return EtaSource::True;
    bad("eta_source must be \"estimated\" or \"true\"", "eta_source");
}

ConstraintContext parse_constraint_context(std::string_view name) {
    const std::string n = lower(name);
    for (ConstraintContext c : {ConstraintContext::BasicJoint, ConstraintContext::LcmHci, ConstraintContext::LcmHciBar}) {
        if (n == to_string(c)) return c;
    }
    bad("context must be basic_joint, lcm_hci or lcm_hcibar", "context");
}

ComputeOutcome compute_records(const PopulationSpec& spec, const std::vector<MethodId>& methods,
                               EtaSource eta_source) {
    require_valid(spec);
    ComputeOutcome out;
    for (MethodId m : methods) {
        try {
            out.records.push_back(to_json(evaluate_method(spec, m, eta_source)));
        } catch (const Error& e) {
            Json j = Json::object();
            j["method"] = std::string(to_string(m));
            j["error"] = to_json(e);
            out.records.push_back(std::move(j));
            out.method_failed = true;
        }
    }
    return out;
}

Json scenario_payload(const PopulationSpec& spec, LcmScenario scenario, double xi_model, double eps_model,
                      EtaSource eta_source) {
    const LcmDeviation d = lcm_scenario_deviation(spec, scenario, xi_model, eps_model, eta_source);
    Json j = Json::object();
    j["scenario"] = to_string(scenario);
    j["delta_se_x"] = d.delta_se_x;
    j["delta_sp_x"] = d.delta_sp_x;
    j["delta_eta"] = d.delta_eta;
    j["estimate"] = lcm_estimate_json(d.estimate);
    return j;
}

Json bounds_payload(const PopulationSpec& spec, ConstraintContext context) {
    Json j = to_json(admissible_bounds(spec, context));
    j["half_plane_bound"] = lcm_half_plane_bound(spec);
    return j;
}

Json crossovers_payload(const std::vector<Crossover>& crossovers) {
    Json list = Json::array();
    for (const Crossover& c : crossovers) {
        Json j = Json::object();
        j["method_a"] = std::string(to_string(c.method_a));
        j["method_b"] = std::string(to_string(c.method_b));
        j["axis_value"] = c.axis_value;
        j["quantity"] = std::string(to_string(c.quantity));
        j["residual"] = c.residual;
        list.push_back(std::move(j));
    }
    Json j = Json::object();
    j["crossovers"] = std::move(list);
    return j;
}

SweepAxis axis_from_json(const Json& j) {
    if (!j.is_object()) bad("axis must be an object", "axis");
    for (const auto& [k, v] : j.items()) {
        if (k != "parameter" && k != "lo" && k != "hi" && k != "points" && k != "linked") {
            bad("unknown field " + k, "axis." + k);
        }
    }
    SweepAxis axis;
    const auto param = j.find("parameter");
    if (param == j.end() || !param->is_string()) bad("axis.parameter must be a string", "axis.parameter");
    const auto p = parse_sweep_parameter(param->get<std::string>());
    if (!p) bad("unknown axis parameter " + param->get<std::string>(), "axis.parameter");
    axis.parameter = *p;
    if (!j.contains("lo") || !j.contains("hi")) bad("axis needs lo and hi", "axis");
    axis.lo = number_field(j, "lo", 0.0, "axis.");
    axis.hi = number_field(j, "hi", 0.0, "axis.");
    if (j.contains("points")) {
        if (!j["points"].is_number_integer()) bad("axis.points must be an integer", "axis.points");
        axis.points = j["points"].get<int>();
    }
    if (j.contains("linked")) {
        if (!j["linked"].is_boolean()) bad("axis.linked must be a boolean", "axis.linked");
        axis.linked = j["linked"].get<bool>();
    }
    return axis;
}

ServiceResponse handle_compute(std::string_view body) {
    return guarded([&] {
        const Json req = request_object(body, {"spec", "methods", "eta_source", "scenario", "xi_model", "eps_model"});
        const PopulationSpec spec = request_spec(req);
        const EtaSource eta = parse_eta_source(string_field(req, "eta_source", "estimated"));
        const ComputeOutcome out = compute_records(spec, request_methods(req), eta);
        Json j = Json::object();
        j["results"] = out.records;
        if (req.contains("scenario")) {
            const std::string name = string_field(req, "scenario", "");
            LcmScenario scenario;
            if (name == to_string(LcmScenario::LcmHciOnDepPopulation)) scenario = LcmScenario::LcmHciOnDepPopulation;
            else if (name == to_string(LcmScenario::LcmDepOnHciPopulation)) scenario = LcmScenario::LcmDepOnHciPopulation;
            else bad("unknown scenario " + name, "scenario");
            j["scenario"] = scenario_payload(spec, scenario, number_field(req, "xi_model", 0.0, ""),
                                             number_field(req, "eps_model", 0.0, ""), eta);
        }
        return ServiceResponse{200, "application/json", dump_json(j)};
    });
}

ServiceResponse handle_sweep(std::string_view body) {
    return guarded([&] {
        const Json req = request_object(body, {"spec", "axis", "methods", "eta_source", "format"});
        const PopulationSpec spec = request_spec(req);
        if (!req.contains("axis")) bad("missing axis", "axis");
        const SweepAxis axis = axis_from_json(req["axis"]);
        const auto format = parse_export_format(string_field(req, "format", "json"));
        if (!format) bad("format must be csv or json", "format");
        SweepOptions opt;
        opt.eta_source = parse_eta_source(string_field(req, "eta_source", "estimated"));
        const SweepResult result = sweep(spec, axis, request_methods(req), opt);
        return ServiceResponse{200, *format == ExportFormat::Csv ? "text/csv" : "application/json",
                               export_sweep(result, *format)};
    });
}

ServiceResponse handle_bounds(std::string_view body) {
    return guarded([&] {
        const Json req = request_object(body, {"spec", "context"});
        const PopulationSpec spec = request_spec(req);
        const ConstraintContext ctx = parse_constraint_context(string_field(req, "context", "basic_joint"));
        return ServiceResponse{200, "application/json", dump_json(bounds_payload(spec, ctx))};
    });
}

ServiceResponse handle_crossovers(std::string_view body) {
    return guarded([&] {
        const Json req = request_object(body, {"spec", "axis", "methods", "eta_source", "quantity"});
        const PopulationSpec spec = request_spec(req);
        if (!req.contains("axis")) bad("missing axis", "axis");
        const SweepAxis axis = axis_from_json(req["axis"]);
        const auto q = parse_crossover_quantity(string_field(req, "quantity", "delta_se"));
        if (!q) bad("unknown quantity", "quantity");
        SweepOptions opt;
        opt.eta_source = parse_eta_source(string_field(req, "eta_source", "estimated"));
        const SweepResult result = sweep(spec, axis, request_methods(req), opt);
        return ServiceResponse{200, "application/json", dump_json(crossovers_payload(find_crossovers(result, *q)))};
    });
}

ServiceResponse handle_health() { return {200, "application/json", R"({"status":"ok"})"}; }

}  // namespace refstd
