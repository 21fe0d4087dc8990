#include "refstd/export.hpp"

#include <cerrno>
#include <cstdlib>
#include <vector>

namespace refstd {

namespace {

constexpr std::string_view kCsvHeader =
    "axis_param,axis_value,method,se,sp,delta_se,delta_sp,clamped,skipped,skip_reason";

[[noreturn]] void bad(const std::string& msg, const std::string& detail = "") {
    throw Error(ErrorCode::BadRequest, msg, detail);
}

const char* bool_text(bool b) { return b ? "true" : "false"; }

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(sep, start);
        out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_number(const std::string& s, const std::string& where) {
    if (s.empty()) bad("empty number", where);
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE) bad("not a number: " + s, where);
    return v;
}

bool parse_bool(const std::string& s, const std::string& where) {
    if (s == "true") return true;
    if (s == "false") return false;
    bad("not a boolean: " + s, where);
}

MethodId method_from(const std::string& tag, const std::string& where) {
    const auto m = parse_method(tag);
    if (!m) bad("unknown method " + tag, where);
    return *m;
}

template <class T>
T field(const Json& j, const char* key, const std::string& where) {
    const auto it = j.find(key);
    if (it == j.end()) bad(std::string("missing ") + key, where + "." + key);
    try {
        return it->get<T>();
    } catch (const Json::exception&) {
        bad(std::string("wrong type for ") + key, where + "." + key);
    }
}

Json cell_to_json(const SweepCell& c) {
    if (c.result) return to_json(*c.result);
    Json j = Json::object();
    j["method"] = std::string(to_string(c.method));
    j["skipped"] = true;
    j["skip_reason"] = c.skip_reason;
    return j;
}

SweepCell cell_from_json(const Json& j, const std::string& where) {
    if (!j.is_object()) bad("result must be an object", where);
    SweepCell c;
    c.method = method_from(field<std::string>(j, "method", where), where + ".method");
    if (j.contains("skipped") && field<bool>(j, "skipped", where)) {
        c.skip_reason = field<std::string>(j, "skip_reason", where);
        return c;
    }
    MethodResult r;
    r.method = c.method;
    r.se = field<double>(j, "se", where);
    r.sp = field<double>(j, "sp", where);
    r.delta_se = field<double>(j, "delta_se", where);
    r.delta_sp = field<double>(j, "delta_sp", where);
    r.hci_assumed = field<bool>(j, "hci_assumed", where);
    r.clamped = field<bool>(j, "clamped", where);
    if (j.contains("raw_se")) r.raw_se = field<double>(j, "raw_se", where);
    if (j.contains("raw_sp")) r.raw_sp = field<double>(j, "raw_sp", where);
    c.result = r;
    return c;
}

}  // namespace

std::optional<ExportFormat> parse_export_format(std::string_view name) noexcept {
    if (name == "csv") return ExportFormat::Csv;
    if (name == "json") return ExportFormat::Json;
    return std::nullopt;
}

std::string export_csv(const SweepResult& result) {
    std::string out(kCsvHeader);
    out.push_back('\n');
    const std::string param(to_string(result.axis.parameter));
    for (const SweepRow& row : result.rows) {
        const std::string x = format_double(row.axis_value);
        for (const SweepCell& c : row.cells) {
            out += param;
            out += ',';
            out += x;
            out += ',';
            out += to_string(c.method);
            if (c.result) {
                const MethodResult& r = *c.result;
                for (double v : {r.se, r.sp, r.delta_se, r.delta_sp}) {
                    out += ',';
                    out += format_double(v);
                }
                out += ',';
                out += bool_text(r.clamped);
                out += ",false,";
            } else {
                out += ",,,,,,true,";
                out += c.skip_reason;
            }
            out += '\n';
        }
    }
    return out;
}

Json sweep_to_json(const SweepResult& result) {
    Json axis = Json::object();
    axis["parameter"] = std::string(to_string(result.axis.parameter));
    axis["lo"] = result.axis.lo;
    axis["hi"] = result.axis.hi;
    axis["points"] = result.axis.points;
    axis["linked"] = result.axis.linked;

    Json methods = Json::array();
    for (MethodId m : result.methods) methods.push_back(std::string(to_string(m)));

    Json rows = Json::array();
    for (const SweepRow& row : result.rows) {
        Json cells = Json::array();
        for (const SweepCell& c : row.cells) cells.push_back(cell_to_json(c));
        Json r = Json::object();
        r["axis_value"] = row.axis_value;
        r["results"] = std::move(cells);
        rows.push_back(std::move(r));
    }

    Json j = Json::object();
    j["axis"] = std::move(axis);
    j["base"] = to_json(result.base);
    j["methods"] = std::move(methods);
    j["eta_source"] = to_string(result.eta_source);
    j["rows"] = std::move(rows);
    return j;
}

std::string export_json(const SweepResult& result) { return dump_json(sweep_to_json(result)) + "\n"; }

std::string export_sweep(const SweepResult& result, ExportFormat format) {
    return format == ExportFormat::Csv ? export_csv(result) : export_json(result);
}

SweepResult sweep_from_json(const Json& j) {
    if (!j.is_object()) bad("sweep must be an object");
    SweepResult out;

    const auto axis_it = j.find("axis");
    if (axis_it == j.end() || !axis_it->is_object()) bad("missing axis", "axis");
    const Json& axis = *axis_it;
    const auto param = parse_sweep_parameter(field<std::string>(axis, "parameter", "axis"));
    if (!param) bad("unknown axis parameter", "axis.parameter");
    out.axis.parameter = *param;
    out.axis.lo = field<double>(axis, "lo", "axis");
    out.axis.hi = field<double>(axis, "hi", "axis");
    out.axis.points = field<int>(axis, "points", "axis");
    out.axis.linked = field<bool>(axis, "linked", "axis");

    const auto base_it = j.find("base");
    if (base_it == j.end()) bad("missing base", "base");
    out.base = spec_from_json(*base_it, "base");

    const auto eta = field<std::string>(j, "eta_source", "");
    if (eta == "true") out.eta_source = EtaSource::True;
    else if (eta == "estimated") out.eta_source = EtaSource::Estimated;
    else bad("unknown eta_source " + eta, "eta_source");

    for (const auto& m : field<std::vector<std::string>>(j, "methods", "")) out.methods.push_back(method_from(m, "methods"));

    const auto rows_it = j.find("rows");
    if (rows_it == j.end() || !rows_it->is_array()) bad("missing rows", "rows");
    for (std::size_t i = 0; i < rows_it->size(); ++i) {
        const std::string where = "rows[" + std::to_string(i) + "]";
        const Json& row = (*rows_it)[i];
        SweepRow r;
        r.axis_value = field<double>(row, "axis_value", where);
        const auto cells = row.find("results");
        if (cells == row.end() || !cells->is_array()) bad("missing results", where + ".results");
        if (cells->size() != out.methods.size()) bad("result count does not match methods", where + ".results");
        for (std::size_t k = 0; k < cells->size(); ++k) {
            r.cells.push_back(cell_from_json((*cells)[k], where + ".results[" + std::to_string(k) + "]"));
            if (r.cells.back().method != out.methods[k]) bad("result order does not match methods", where);
        }
        out.rows.push_back(std::move(r));
    }
    return out;
}

SweepResult import_json(std::string_view text) { return sweep_from_json(parse_json(text)); }

SweepResult import_csv(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) lines.push_back(line);
        start = end + 1;
    }
    if (lines.empty() || lines.front() != kCsvHeader) bad("missing or unexpected CSV header", "header");

    SweepResult out;
    std::string row_key;
    bool methods_fixed = false;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string where = "line " + std::to_string(i + 1);
        const auto cols = split(lines[i], ',');
        if (cols.size() != 10) bad("expected 10 columns", where);
        const auto param = parse_sweep_parameter(cols[0]);
        if (!param) bad("unknown axis parameter " + cols[0], where);
        if (i == 1) out.axis.parameter = *param;
        else if (*param != out.axis.parameter) bad("mixed axis parameters", where);

        if (out.rows.empty() || cols[1] != row_key) {
            if (!out.rows.empty()) {
                if (!methods_fixed) methods_fixed = true;
                if (out.rows.back().cells.size() != out.methods.size()) bad("incomplete row group", where);
            }
            row_key = cols[1];
            SweepRow r;
            r.axis_value = parse_number(cols[1], where);
            out.rows.push_back(std::move(r));
        }

        SweepCell c;
        c.method = method_from(cols[2], where);
        SweepRow& row = out.rows.back();
        if (!methods_fixed) {
            out.methods.push_back(c.method);
        } else if (row.cells.size() >= out.methods.size() || out.methods[row.cells.size()] != c.method) {
            bad("method order differs between rows", where);
        }

        if (parse_bool(cols[8], where)) {
            for (std::size_t k = 3; k <= 7; ++k) {
                if (!cols[k].empty()) bad("skipped row carries values", where);
            }
            c.skip_reason = cols[9];
        } else {
            MethodResult r;
            r.method = c.method;
            r.se = parse_number(cols[3], where);
            r.sp = parse_number(cols[4], where);
            r.delta_se = parse_number(cols[5], where);
            r.delta_sp = parse_number(cols[6], where);
            r.clamped = parse_bool(cols[7], where);
            r.hci_assumed = false;
            if (!cols[9].empty()) bad("unskipped row carries a skip reason", where);
            c.result = r;
        }
        row.cells.push_back(std::move(c));
    }
    if (out.rows.empty()) bad("no data rows", "rows");
    if (out.rows.back().cells.size() != out.methods.size()) bad("incomplete row group", "rows");
    out.axis.lo = out.rows.front().axis_value;
    out.axis.hi = out.rows.back().axis_value;
    out.axis.points = static_cast<int>(out.rows.size());
    return out;
}

}  // namespace refstd
