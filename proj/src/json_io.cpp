#include "refstd/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <initializer_list>

namespace refstd {

namespace {

constexpr const char* kSpecFields[] = {"se_x", "sp_x", "se_z1", "sp_z1", "se_z2", "sp_z2", "eta", "xi", "eps"};

void dump_string(const std::string& s, std::string& out) {
    // Reuse the library's escaping for strings.
    out += Json(s).dump();
}

void dump_into(const Json& j, std::string& out) {
    switch (j.type()) {
        case Json::value_t::object: {
            out.push_back('{');
            bool first = true;
            for (const auto& [k, v] : j.items()) {
                if (!first) out.push_back(',');
                first = false;
                dump_string(k, out);
                out.push_back(':');
                dump_into(v, out);
            }
            out.push_back('}');
            break;
        }
        case Json::value_t::array: {
            out.push_back('[');
            bool first = true;
            for (const auto& v : j) {
                if (!first) out.push_back(',');
                first = false;
                dump_into(v, out);
            }
            out.push_back(']');
            break;
        }
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            out += std::isfinite(v) ? format_double(v) : "null";
            break;
        }
        case Json::value_t::string: dump_string(j.get<std::string>(), out); break;
        default: out += j.dump(); break;
    }
}

double& spec_field(PopulationSpec& s, std::string_view name) {
    if (name == "se_x") return s.se_x;
    if (name == "sp_x") return s.sp_x;
    if (name == "se_z1") return s.se_z1;
    if (name == "sp_z1") return s.sp_z1;
    if (name == "se_z2") return s.se_z2;
    if (name == "sp_z2") return s.sp_z2;
    if (name == "eta") return s.eta;
    if (name == "xi") return s.xi;
    return s.eps;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string dump_json(const Json& j) {
    std::string out;
    dump_into(j, out);
    return out;
}

Json parse_json(std::string_view text) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::BadRequest, std::string("malformed JSON: ") + e.what(), "");
    }
}

Json to_json(const PopulationSpec& s) {
    Json j = Json::object();
    PopulationSpec copy = s;
    for (const char* f : kSpecFields) j[f] = spec_field(copy, f);
    return j;
}

PopulationSpec spec_from_json(const Json& j, const std::string& path) {
    if (!j.is_object()) throw Error(ErrorCode::BadRequest, path + " must be an object", path);
    for (const auto& [k, v] : j.items()) {
        bool known = false;
        for (const char* f : kSpecFields) known = known || k == f;
        if (!known) throw Error(ErrorCode::BadRequest, "unknown field " + k, path + "." + k);
    }
    PopulationSpec s;
    for (const char* f : kSpecFields) {
        const auto it = j.find(f);
        if (it == j.end()) throw Error(ErrorCode::BadRequest, std::string("missing field ") + f, path + "." + f);
        if (!it->is_number()) {
            throw Error(ErrorCode::BadRequest, std::string(f) + " must be a number", path + "." + f);
        }
        spec_field(s, f) = it->get<double>();
    }
    return s;
}

Json to_json(const MethodResult& r) {
    Json j = Json::object();
    j["method"] = std::string(to_string(r.method));
    j["se"] = r.se;
    j["sp"] = r.sp;
    j["delta_se"] = r.delta_se;
    j["delta_sp"] = r.delta_sp;
    j["hci_assumed"] = r.hci_assumed;
    j["clamped"] = r.clamped;
    if (r.raw_se) j["raw_se"] = *r.raw_se;
    if (r.raw_sp) j["raw_sp"] = *r.raw_sp;
    return j;
}

Json to_json(const Error& e) {
    Json j = Json::object();
    j["code"] = std::string(api_code(e.code()));
    j["message"] = e.what();
    j["detail"] = e.detail();
    return j;
}

Json to_json(const CovarianceBounds& b) {
    Json j = Json::object();
    j["context"] = to_string(b.context);
    j["xi"] = Json::array({b.xi.lo, b.xi.hi});
    j["eps"] = Json::array({b.eps.lo, b.eps.hi});
    return j;
}

}  // namespace refstd
