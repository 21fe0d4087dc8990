#include "refstd/sweep.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>
#include <functional>
#include <thread>

#include "refstd/error.hpp"

namespace refstd {

namespace {

constexpr double kCrossoverWidth = 1e-13;
constexpr double kCrossoverResidual = 1e-9;

std::string normalize(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) out.push_back(c == '-' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
}

[[noreturn]] void bad_axis(const std::string& msg, const char* field) {
    throw Error(ErrorCode::InvalidAxis, msg, std::string("axis.") + field);
}

SweepCell evaluate_cell(const PopulationSpec& spec, MethodId method, EtaSource eta_source) {
    SweepCell cell;
    cell.method = method;
    try {
        cell.result = evaluate_method(spec, method, eta_source);
    } catch (const Error& e) {
        cell.skip_reason = std::string(api_code(e.code()));
    }
    return cell;
}

SweepRow evaluate_row(const PopulationSpec& base, const SweepAxis& axis, const std::vector<MethodId>& methods,
                      EtaSource eta_source, int i) {
    SweepRow row;
    row.axis_value = axis_value(axis, i);
    const PopulationSpec spec = apply_axis(base, axis, row.axis_value);
    row.cells.reserve(methods.size());
    for (MethodId m : methods) row.cells.push_back(evaluate_cell(spec, m, eta_source));
    return row;
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

std::string_view to_string(SweepParameter p) noexcept {
    switch (p) {
        case SweepParameter::SeZ1: return "se_z1";
        case SweepParameter::SpZ1: return "sp_z1";
        case SweepParameter::SeZ2: return "se_z2";
        case SweepParameter::SpZ2: return "sp_z2";
        case SweepParameter::Eta: return "eta";
        case SweepParameter::Xi: return "xi";
        case SweepParameter::Eps: return "eps";
    }
    return "se_z1";
}

std::optional<SweepParameter> parse_sweep_parameter(std::string_view name) noexcept {
    const std::string n = normalize(name);
    for (SweepParameter p : {SweepParameter::SeZ1, SweepParameter::SpZ1, SweepParameter::SeZ2, SweepParameter::SpZ2,
                             SweepParameter::Eta, SweepParameter::Xi, SweepParameter::Eps}) {
        if (n == to_string(p)) return p;
    }
    return std::nullopt;
}

bool is_probability_axis(SweepParameter p) noexcept { return p != SweepParameter::Xi && p != SweepParameter::Eps; }

void validate_axis(const SweepAxis& axis) {
    if (axis.points < 2) bad_axis("points must be at least 2", "points");
    if (!std::isfinite(axis.lo) || !std::isfinite(axis.hi)) bad_axis("axis bounds must be finite", "lo");
    if (!(axis.lo < axis.hi)) bad_axis("lo must be below hi", "lo");
    if (is_probability_axis(axis.parameter) && (axis.lo < 0.0 || axis.hi > 1.0)) {
        bad_axis(std::string(to_string(axis.parameter)) + " bounds outside [0,1]", axis.lo < 0.0 ? "lo" : "hi");
    }
}

double axis_value(const SweepAxis& axis, int i) {
    if (i <= 0) return axis.lo;
    if (i >= axis.points - 1) return axis.hi;
    const double t = static_cast<double>(i) / static_cast<double>(axis.points - 1);
    return axis.lo + (axis.hi - axis.lo) * t;
}

PopulationSpec apply_axis(const PopulationSpec& base, const SweepAxis& axis, double v) {
    PopulationSpec s = base;
    switch (axis.parameter) {
        case SweepParameter::SeZ1:
            s.se_z1 = v;
            if (axis.linked) s.se_z2 = v;
            break;
        case SweepParameter::SpZ1:
            s.sp_z1 = v;
            if (axis.linked) s.sp_z2 = v;
            break;
        case SweepParameter::SeZ2:
            s.se_z2 = v;
            if (axis.linked) s.se_z1 = v;
            break;
        case SweepParameter::SpZ2:
            s.sp_z2 = v;
            if (axis.linked) s.sp_z1 = v;
            break;
        case SweepParameter::Eta: s.eta = v; break;
        case SweepParameter::Xi: s.xi = v; break;
        case SweepParameter::Eps: s.eps = v; break;
    }
    return s;
}

MethodResult evaluate_method(const PopulationSpec& spec, MethodId method, EtaSource eta_source) {
    if (is_lcm(method)) return lcm_method(spec, method, eta_source);
    return comparative_method(spec, method);
}

SweepResult sweep(const PopulationSpec& base, const SweepAxis& axis, const std::vector<MethodId>& methods,
                  const SweepOptions& options) {
    validate_axis(axis);
    if (methods.empty()) throw Error(ErrorCode::BadRequest, "no methods requested", "methods");
    // Covariance bounds move with the swept parameter, so only range and
    // Youden problems of the base are fatal.
    for (const Violation& v : validate(apply_axis(base, axis, 0.5 * (axis.lo + axis.hi))).violations) {
        if (v.kind != ViolationKind::Covariance) throw Error(ErrorCode::InvalidSpec, v.message, "spec." + v.field);
    }

    SweepResult out;
    out.axis = axis;
    out.base = base;
    out.methods = methods;
    out.eta_source = options.eta_source;
    out.rows.resize(static_cast<std::size_t>(axis.points));

    unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
    threads = std::min<unsigned>(threads, static_cast<unsigned>(axis.points));
    if (threads <= 1) {
        for (int i = 0; i < axis.points; ++i) out.rows[i] = evaluate_row(base, axis, methods, options.eta_source, i);
        return out;
    }

    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (int i = static_cast<int>(t); i < axis.points; i += static_cast<int>(threads)) {
                out.rows[i] = evaluate_row(base, axis, methods, options.eta_source, i);
            }
        });
    }
    for (auto& th : pool) th.join();
    return out;
}

std::string_view to_string(CrossoverQuantity q) noexcept {
    switch (q) {
        case CrossoverQuantity::DeltaSe: return "delta_se";
        case CrossoverQuantity::DeltaSp: return "delta_sp";
        case CrossoverQuantity::AbsDeltaSe: return "abs_delta_se";
        case CrossoverQuantity::AbsDeltaSp: return "abs_delta_sp";
    }
    return "delta_se";
}

std::optional<CrossoverQuantity> parse_crossover_quantity(std::string_view name) noexcept {
    const std::string n = normalize(name);
    for (CrossoverQuantity q : {CrossoverQuantity::DeltaSe, CrossoverQuantity::DeltaSp, CrossoverQuantity::AbsDeltaSe,
                                CrossoverQuantity::AbsDeltaSp}) {
        if (n == to_string(q)) return q;
    }
    return std::nullopt;
}

double quantity_of(const MethodResult& r, CrossoverQuantity q) noexcept {
    switch (q) {
        case CrossoverQuantity::DeltaSe: return r.delta_se;
        case CrossoverQuantity::DeltaSp: return r.delta_sp;
        case CrossoverQuantity::AbsDeltaSe: return std::abs(r.delta_se);
        case CrossoverQuantity::AbsDeltaSp: return std::abs(r.delta_sp);
    }
    return 0.0;
}

namespace {

using DiffFn = std::function<std::optional<double>(double)>;

// Bisects a bracketed sign change of f; nullopt when f becomes undefined inside
// the bracket or the residual never drops below kCrossoverResidual.
std::optional<std::pair<double, double>> refine(double lo, double hi, double dlo, double dhi, const DiffFn& f) {
    double best_x = std::abs(dlo) < std::abs(dhi) ? lo : hi;
    double best_d = std::abs(dlo) < std::abs(dhi) ? dlo : dhi;
    while (hi - lo > kCrossoverWidth) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const auto dm = f(mid);
        if (!dm) return std::nullopt;
        if (std::abs(*dm) < std::abs(best_d)) {
            best_x = mid;
            best_d = *dm;
        }
        if (*dm == 0.0) break;
        if (sign_of(*dm) == sign_of(dlo)) {
            lo = mid;
            dlo = *dm;
        } else {
            hi = mid;
        }
    }
    if (std::abs(best_d) >= kCrossoverResidual) return std::nullopt;
    return std::make_pair(best_x, best_d);
}

// Walks the grid values of `grid_diff` (nullopt = skipped) and reports every
// sign change, refined through `f`.
std::vector<std::pair<double, double>> sign_changes(const SweepResult& result,
                                                    const std::function<std::optional<double>(const SweepRow&)>& grid_diff,
                                                    const DiffFn& f) {
    std::vector<std::pair<double, double>> out;
    bool have_prev = false;
    double prev_x = 0.0;
    double prev_d = 0.0;
    for (const SweepRow& row : result.rows) {
        const auto d = grid_diff(row);
        if (!d) {
            have_prev = false;
            continue;
        }
        if (have_prev && sign_of(prev_d) != 0 && sign_of(*d) == 0) {
            out.emplace_back(row.axis_value, 0.0);
        } else if (have_prev && sign_of(prev_d) * sign_of(*d) < 0) {
            if (auto hit = refine(prev_x, row.axis_value, prev_d, *d, f)) out.push_back(*hit);
        }
        have_prev = true;
        prev_x = row.axis_value;
        prev_d = *d;
    }
    return out;
}

std::optional<double> evaluate_quantity(const SweepResult& result, double x, MethodId m, CrossoverQuantity q) {
    try {
        return quantity_of(evaluate_method(apply_axis(result.base, result.axis, x), m, result.eta_source), q);
    } catch (const Error&) {
        return std::nullopt;
    }
}

}  // namespace

std::vector<Crossover> find_crossovers(const SweepResult& result, CrossoverQuantity quantity) {
    std::vector<Crossover> out;
    const auto& methods = result.methods;
    for (std::size_t ia = 0; ia < methods.size(); ++ia) {
        for (std::size_t ib = ia + 1; ib < methods.size(); ++ib) {
            const MethodId a = methods[ia];
            const MethodId b = methods[ib];
            if (a == b) continue;
            auto grid = [&](const SweepRow& row) -> std::optional<double> {
                const SweepCell& ca = row.cells[ia];
                const SweepCell& cb = row.cells[ib];
                if (ca.skipped() || cb.skipped()) return std::nullopt;
                return quantity_of(*ca.result, quantity) - quantity_of(*cb.result, quantity);
            };
            auto f = [&](double x) -> std::optional<double> {
                const auto qa = evaluate_quantity(result, x, a, quantity);
                const auto qb = evaluate_quantity(result, x, b, quantity);
                if (!qa || !qb) return std::nullopt;
                return *qa - *qb;
            };
            for (const auto& [x, r] : sign_changes(result, grid, f)) out.push_back({a, b, x, quantity, r});
        }
    }
    return out;
}

std::vector<double> find_zero_crossings(const SweepResult& result, MethodId method, CrossoverQuantity quantity) {
    const auto it = std::find(result.methods.begin(), result.methods.end(), method);
    if (it == result.methods.end()) return {};
    const std::size_t k = static_cast<std::size_t>(it - result.methods.begin());
    auto grid = [&](const SweepRow& row) -> std::optional<double> {
        if (row.cells[k].skipped()) return std::nullopt;
        return quantity_of(*row.cells[k].result, quantity);
    };
    auto f = [&](double x) { return evaluate_quantity(result, x, method, quantity); };
    std::vector<double> out;
    for (const auto& [x, r] : sign_changes(result, grid, f)) out.push_back(x);
    return out;
}

}  // namespace refstd
