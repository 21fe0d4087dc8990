// refstd: command-line front end for the deviation formulas, sweeps,
// verification and the HTTP service.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>

#include "refstd/error.hpp"
#include "refstd/export.hpp"
#include "refstd/http_server.hpp"
#include "refstd/service.hpp"
#include "refstd/verify.hpp"

using namespace refstd;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitMethod = 3;

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::DegenerateReference:
        case ErrorCode::UndefinedEstimator:
        case ErrorCode::NoRoot: return kExitMethod;
        default: return kExitUsage;
    }
}

void add_spec_options(CLI::App* cmd, PopulationSpec& spec) {
    cmd->add_option("--se-x", spec.se_x, "Sensitivity of the index test X")->capture_default_str();
    cmd->add_option("--sp-x", spec.sp_x, "Specificity of the index test X")->capture_default_str();
    cmd->add_option("--se-z1", spec.se_z1, "Sensitivity of reference Z1")->capture_default_str();
    cmd->add_option("--sp-z1", spec.sp_z1, "Specificity of reference Z1")->capture_default_str();
    cmd->add_option("--se-z2", spec.se_z2, "Sensitivity of reference Z2")->capture_default_str();
    cmd->add_option("--sp-z2", spec.sp_z2, "Specificity of reference Z2")->capture_default_str();
    cmd->add_option("--eta", spec.eta, "Prevalence")->capture_default_str();
    cmd->add_option("--xi", spec.xi, "cov(X, Z1 | Y=1)")->capture_default_str();
    cmd->add_option("--eps", spec.eps, "cov(X, Z1 | Y=0)")->capture_default_str();
}

struct SweepFlags {
    std::string axis;
    double lo = 0.0;
    double hi = 1.0;
    int points = kDefaultGridPoints;
    bool linked = false;
    std::string methods = "igs,crs_a,crs_o,da";
    std::string eta_source = "estimated";
    unsigned threads = 1;
};

void add_sweep_options(CLI::App* cmd, SweepFlags& f) {
    cmd->add_option("--axis", f.axis, "se_z1, sp_z1, se_z2, sp_z2, eta, xi or eps")->required();
    cmd->add_option("--lo", f.lo, "Axis lower bound")->required();
    cmd->add_option("--hi", f.hi, "Axis upper bound")->required();
    cmd->add_option("--points", f.points, "Grid points")->capture_default_str();
    cmd->add_flag("--linked", f.linked, "Move the other reference's Se/Sp with the swept one");
    cmd->add_option("--methods", f.methods, "Comma-separated methods, or 'all'")->capture_default_str();
    cmd->add_option("--eta-source", f.eta_source, "Prevalence used by LCM Se/Sp: estimated or true")
        ->capture_default_str();
    cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores)")->capture_default_str();
}

SweepResult run_sweep(const PopulationSpec& spec, const SweepFlags& f) {
    const auto param = parse_sweep_parameter(f.axis);
    if (!param) throw Error(ErrorCode::InvalidAxis, "unknown axis " + f.axis, "axis.parameter");
    SweepAxis axis{*param, f.lo, f.hi, f.points, f.linked};
    SweepOptions opt{parse_eta_source(f.eta_source), f.threads};
    return sweep(spec, axis, parse_method_list(f.methods), opt);
}

bool write_output(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return true;
    }
    std::ofstream out(path, std::ios::binary);
    out << text;
    return static_cast<bool>(out);
}

std::optional<std::string> read_input(const std::string& path) {
    if (path.empty() || path == "-") {
        return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void print_error(const Error& e) { std::printf("%s\n", dump_json(to_json(e)).c_str()); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deviations of Se/Sp estimates under imperfect reference standards"};
    app.require_subcommand(1);

    PopulationSpec spec = baseline_spec();

    auto* compute = app.add_subcommand("compute", "Se/Sp and deviations for each method");
    add_spec_options(compute, spec);
    std::string compute_methods = "igs,crs_a,crs_o,da";
    std::string compute_eta = "estimated";
    std::string scenario;
    double xi_model = 0.0;
    double eps_model = 0.0;
    compute->add_option("--methods", compute_methods, "Comma-separated methods, or 'all'")->capture_default_str();
    compute->add_option("--eta-source", compute_eta, "Prevalence used by LCM Se/Sp: estimated or true")
        ->capture_default_str();
    compute->add_option("--scenario", scenario, "lcm_hci_on_dep_population or lcm_dep_on_hci_population");
    compute->add_option("--xi-model", xi_model, "Model xi for lcm_dep_on_hci_population");
    compute->add_option("--eps-model", eps_model, "Model eps for lcm_dep_on_hci_population");

    auto* sweep_cmd = app.add_subcommand("sweep", "Deviation curves along one parameter");
    add_spec_options(sweep_cmd, spec);
    SweepFlags sweep_flags;
    add_sweep_options(sweep_cmd, sweep_flags);
    std::string format = "csv";
    std::string out_path;
    sweep_cmd->add_option("--format", format, "csv or json")->capture_default_str();
    sweep_cmd->add_option("--out", out_path, "Output file (default stdout)");

    auto* cross = app.add_subcommand("crossovers", "Points where two methods' curves cross");
    add_spec_options(cross, spec);
    SweepFlags cross_flags;
    add_sweep_options(cross, cross_flags);
    std::string quantity = "delta_se";
    cross->add_option("--quantity", quantity, "delta_se, delta_sp, abs_delta_se or abs_delta_sp")
        ->capture_default_str();

    auto* bounds = app.add_subcommand("bounds", "Admissible ranges of xi and eps");
    add_spec_options(bounds, spec);
    std::string context = "basic_joint";
    bounds->add_option("--context", context, "basic_joint, lcm_hci or lcm_hcibar")->capture_default_str();

    auto* verify = app.add_subcommand("verify", "Randomized check of the formulas against enumeration");
    long long samples = 10000;
    std::uint64_t seed = 42;
    verify->add_option("--samples", samples, "Number of random populations")->capture_default_str();
    verify->add_option("--seed", seed, "Random seed")->capture_default_str();

    auto* serve = app.add_subcommand("serve", "HTTP API and static UI");
    int port = default_port();
    std::string host = "127.0.0.1";
    std::string static_dir;
    serve->add_option("--port", port, "Listen port (REFSTD_PORT overrides the default)")->capture_default_str();
    serve->add_option("--host", host, "Listen address")->capture_default_str();
    serve->add_option("--static-dir", static_dir, "Directory served at /");

    auto* convert = app.add_subcommand("import", "Convert a sweep export between csv and json");
    convert->alias("convert");
    std::string in_path;
    std::string from;
    std::string to = "json";
    std::string convert_out;
    convert->add_option("--in", in_path, "Input file (default stdin)");
    convert->add_option("--from", from, "csv or json (default: detect)");
    convert->add_option("--to", to, "csv or json")->capture_default_str();
    convert->add_option("--out", convert_out, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (compute->parsed()) {
            const EtaSource eta = parse_eta_source(compute_eta);
            const ComputeOutcome out = compute_records(spec, parse_method_list(compute_methods), eta);
            for (const Json& r : out.records) std::printf("%s\n", dump_json(r).c_str());
            if (!scenario.empty()) {
                LcmScenario sc;
                if (scenario == to_string(LcmScenario::LcmHciOnDepPopulation)) sc = LcmScenario::LcmHciOnDepPopulation;
                else if (scenario == to_string(LcmScenario::LcmDepOnHciPopulation)) sc = LcmScenario::LcmDepOnHciPopulation;
                else throw Error(ErrorCode::BadRequest, "unknown scenario " + scenario, "scenario");
                std::printf("%s\n", dump_json(scenario_payload(spec, sc, xi_model, eps_model, eta)).c_str());
            }
            return out.method_failed ? kExitMethod : kExitOk;
        }
        if (sweep_cmd->parsed()) {
            const auto fmt = parse_export_format(format);
            if (!fmt) throw Error(ErrorCode::BadRequest, "format must be csv or json", "format");
            if (!write_output(export_sweep(run_sweep(spec, sweep_flags), *fmt), out_path)) {
                std::fprintf(stderr, "cannot write %s\n", out_path.c_str());
                return kExitFailure;
            }
            return kExitOk;
        }
        if (cross->parsed()) {
            const auto q = parse_crossover_quantity(quantity);
            if (!q) throw Error(ErrorCode::BadRequest, "unknown quantity " + quantity, "quantity");
            const SweepResult r = run_sweep(spec, cross_flags);
            std::printf("%s\n", dump_json(crossovers_payload(find_crossovers(r, *q))).c_str());
            return kExitOk;
        }
        if (bounds->parsed()) {
            std::printf("%s\n", dump_json(bounds_payload(spec, parse_constraint_context(context))).c_str());
            return kExitOk;
        }
        if (verify->parsed()) {
            if (samples <= 0) {
                std::fprintf(stderr, "--samples must be positive\n");
                return kExitUsage;
            }
            const VerifyReport report = run_verification({static_cast<std::size_t>(samples), seed});
            std::printf("%s\n", report.summary().c_str());
            for (const auto& m : report.oracle.messages) std::printf("FAIL %s\n", m.c_str());
            for (const auto& m : report.findings.messages) std::printf("FAIL %s\n", m.c_str());
            std::printf("%s\n", report.ok() ? "verify: ok" : "verify: FAILED");
            return report.ok() ? kExitOk : kExitFailure;
        }
        if (serve->parsed()) {
            httplib::Server server;
            const std::optional<std::string> dir = static_dir.empty() ? std::nullopt : std::optional(static_dir);
            if (!configure_routes(server, dir)) {
                std::fprintf(stderr, "cannot serve static directory %s\n", static_dir.c_str());
                return kExitUsage;
            }
            std::fprintf(stderr, "listening on http://%s:%d\n", host.c_str(), port);
            return server.listen(host, port) ? kExitOk : kExitFailure;
        }
        if (convert->parsed()) {
            const auto text = read_input(in_path);
            if (!text) {
                std::fprintf(stderr, "cannot read %s\n", in_path.c_str());
                return kExitFailure;
            }
            std::string src = from;
            if (src.empty()) {
                const auto first = text->find_first_not_of(" \t\r\n");
                src = first != std::string::npos && (*text)[first] == '{' ? "json" : "csv";
            }
            const auto in_fmt = parse_export_format(src);
            const auto out_fmt = parse_export_format(to);
            if (!in_fmt || !out_fmt) throw Error(ErrorCode::BadRequest, "formats must be csv or json", "format");
            const SweepResult r = *in_fmt == ExportFormat::Csv ? import_csv(*text) : import_json(*text);
            if (!write_output(export_sweep(r, *out_fmt), convert_out)) return kExitFailure;
            return kExitOk;
        }
    } catch (const Error& e) {
        print_error(e);
        return exit_code_for(e.code());
    }
    return kExitUsage;
}
