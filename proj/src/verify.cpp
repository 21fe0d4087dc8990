#include "refstd/verify.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "refstd/error.hpp"
#include "refstd/lcm.hpp"
#include "refstd/methods.hpp"
#include "refstd/oracle.hpp"
#include "refstd/random_spec.hpp"

namespace refstd {

namespace {

constexpr std::size_t kMaxMessages = 20;
constexpr double kMonotoneSlack = 1e-14;
constexpr double kDecisionMargin = 1e-12;

std::string describe(const PopulationSpec& s) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "{se_x=%.17g sp_x=%.17g se_z1=%.17g sp_z1=%.17g se_z2=%.17g sp_z2=%.17g eta=%.17g xi=%.17g eps=%.17g}",
                  s.se_x, s.sp_x, s.se_z1, s.sp_z1, s.se_z2, s.sp_z2, s.eta, s.xi, s.eps);
    return buf;
}

std::string label(MethodId m, const char* what) { return std::string(to_string(m)) + " " + what; }

void compare_results(const MethodResult& a, const MethodResult& b, const std::string& what, CheckTally& t) {
    t.expect_close(a.se, b.se, kOracleTol, what + " se");
    t.expect_close(a.sp, b.sp, kOracleTol, what + " sp");
    t.expect_close(a.delta_se, b.delta_se, kOracleTol, what + " delta_se");
    t.expect_close(a.delta_sp, b.delta_sp, kOracleTol, what + " delta_sp");
}

// Runs f, and reports whether it threw DegenerateReference.
template <class F>
std::optional<MethodResult> try_method(F&& f, bool& degenerate) {
    try {
        degenerate = false;
        return f();
    } catch (const Error& e) {
        if (e.code() != ErrorCode::DegenerateReference) throw;
        degenerate = true;
        return std::nullopt;
    }
}

using Setter = std::function<void(PopulationSpec&, double)>;

struct Axis {
    const char* name;
    Setter add;
};

const Axis kAxes[] = {
    {"se_x", [](PopulationSpec& s, double h) { s.se_x += h; }},
    {"sp_x", [](PopulationSpec& s, double h) { s.sp_x += h; }},
    {"se_z1", [](PopulationSpec& s, double h) { s.se_z1 += h; }},
    {"sp_z1", [](PopulationSpec& s, double h) { s.sp_z1 += h; }},
    {"se_z2", [](PopulationSpec& s, double h) { s.se_z2 += h; }},
    {"sp_z2", [](PopulationSpec& s, double h) { s.sp_z2 += h; }},
    {"eta", [](PopulationSpec& s, double h) { s.eta += h; }},
};

// Direction of a deviation along each axis, in kAxes order: -1 decreasing,
// +1 increasing, 0 not asserted.
struct Monotony {
    int se[7];
    int sp[7];
};

Monotony monotony(MethodId m) {
    const bool uses_z2 = m != MethodId::IGS;
    const int z2 = uses_z2 ? 1 : 0;
    return {{-1, -1, 1, 1, z2, z2, 1}, {-1, -1, 1, 1, z2, z2, -1}};
}

// Zero-deviation conditions; each entry maps a spec to the spec meeting one condition.
struct ZeroCondition {
    const char* name;
    PopulationSpec (*apply)(PopulationSpec);
};

std::vector<ZeroCondition> se_zero_conditions(MethodId m) {
    switch (m) {
        case MethodId::IGS: return {{"sp_z1=1", [](PopulationSpec s) { s.sp_z1 = 1.0; return s; }}};
        case MethodId::CRS_A:
            return {{"sp_z1=1", [](PopulationSpec s) { s.sp_z1 = 1.0; return s; }},
                    {"sp_z2=1", [](PopulationSpec s) { s.sp_z2 = 1.0; return s; }}};
        default:
            return {{"sp_z1=sp_z2=1", [](PopulationSpec s) {
                         s.sp_z1 = 1.0;
                         s.sp_z2 = 1.0;
                         return s;
                     }}};
    }
}

std::vector<ZeroCondition> sp_zero_conditions(MethodId m) {
    switch (m) {
        case MethodId::IGS: return {{"se_z1=1", [](PopulationSpec s) { s.se_z1 = 1.0; return s; }}};
        case MethodId::CRS_A:
            return {{"se_z1=se_z2=1", [](PopulationSpec s) {
                         s.se_z1 = 1.0;
                         s.se_z2 = 1.0;
                         return s;
                     }}};
        default:
            return {{"se_z1=1", [](PopulationSpec s) { s.se_z1 = 1.0; return s; }},
                    {"se_z2=1", [](PopulationSpec s) { s.se_z2 = 1.0; return s; }}};
    }
}

struct ViolationTerms {
    double dependence;
    double se_threshold;
    double sp_threshold;
};

ViolationTerms violation_terms(const PopulationSpec& s, MethodId m) {
    const double eta = s.eta;
    const double j = s.se_x + s.sp_x - 1.0;
    switch (m) {
        case MethodId::IGS:
            return {eta * s.xi + (1 - eta) * s.eps, (1 - eta) * (1 - s.sp_z1) * j, eta * (1 - s.se_z1) * j};
        case MethodId::CRS_A:
            return {eta * s.se_z2 * s.xi + (1 - eta) * (1 - s.sp_z2) * s.eps,
                    (1 - eta) * (1 - s.sp_z1) * (1 - s.sp_z2) * j, eta * (1 - s.se_z1 * s.se_z2) * j};
        default:
            return {eta * (1 - s.se_z2) * s.xi + (1 - eta) * s.sp_z2 * s.eps, (1 - eta) * (1 - s.sp_z1 * s.sp_z2) * j,
                    eta * (1 - s.se_z1) * (1 - s.se_z2) * j};
    }
}

constexpr MethodId kDecomposable[] = {MethodId::IGS, MethodId::CRS_A, MethodId::CRS_O};

}  // namespace

void CheckTally::expect(bool pass, const std::string& what) {
    ++checks;
    if (pass) return;
    ++failures;
    if (messages.size() < kMaxMessages) messages.push_back(what);
}

void CheckTally::expect_close(double a, double b, double tol, const std::string& what) {
    const double d = std::abs(a - b);
    if (d > max_discrepancy || std::isnan(d)) max_discrepancy = std::isnan(d) ? INFINITY : d;
    char buf[96];
    std::snprintf(buf, sizeof buf, " |%.17g - %.17g| = %.3g", a, b, d);
    expect(d <= tol, what + buf);
}

void CheckTally::merge(const CheckTally& other) {
    checks += other.checks;
    failures += other.failures;
    if (other.max_discrepancy > max_discrepancy) max_discrepancy = other.max_discrepancy;
    for (const auto& m : other.messages) {
        if (messages.size() < kMaxMessages) messages.push_back(m);
    }
}

void check_oracle_equivalence(const PopulationSpec& spec, CheckTally& t) {
    const std::string where = " at " + describe(spec);
    for (MethodId m : kComparativeMethods) {
        bool closed_degenerate = false;
        bool oracle_degenerate = false;
        const auto closed = try_method([&] { return comparative_method(spec, m); }, closed_degenerate);
        const auto truth = try_method([&] { return oracle::oracle_method_accuracy(spec, m); }, oracle_degenerate);
        t.expect(closed_degenerate == oracle_degenerate, label(m, "degeneracy disagrees with oracle") + where);
        if (!closed || !truth) continue;
        compare_results(*closed, *truth, label(m, "closed form vs oracle") + where, t);

        const auto [xi_t, eps_t] = oracle::oracle_tilde_covariance(spec, m);
        const TildeReference tilde = tilde_reference(spec, m);
        t.expect_close(tilde.xi_tilde, xi_t, kOracleTol, label(m, "xi_tilde vs oracle") + where);
        t.expect_close(tilde.eps_tilde, eps_t, kOracleTol, label(m, "eps_tilde vs oracle") + where);

        if (m != MethodId::IGS) {
            bool unified_degenerate = false;
            const auto unified = try_method([&] { return unified_igs_equivalence(spec, m); }, unified_degenerate);
            t.expect(!unified_degenerate, label(m, "unified form degenerate") + where);
            if (unified) compare_results(*unified, *closed, label(m, "unified IGS form vs direct") + where, t);
        }
    }

    const MomentSet a = population_moments(spec);
    const MomentSet b = oracle::oracle_lcm_moments(spec);
    const double pa[] = {a.p1, a.p2, a.p3, a.p12, a.p13, a.p23, a.p123};
    const double pb[] = {b.p1, b.p2, b.p3, b.p12, b.p13, b.p23, b.p123};
    for (int i = 0; i < 7; ++i) t.expect_close(pa[i], pb[i], kOracleTol, "moment " + std::to_string(i) + where);
}

void check_hci_findings(const PopulationSpec& input, CheckTally& t) {
    const PopulationSpec spec = input.with_covariances(0.0, 0.0);
    const std::string where = " at " + describe(spec);
    const double h = kFiniteDiffStep;
    for (MethodId m : kDecomposable) {
        const MethodResult r = comparative_method(spec, m);
        t.expect(r.delta_se <= 0.0, label(m, "delta_se > 0 under HCI") + where);
        t.expect(r.delta_sp <= 0.0, label(m, "delta_sp > 0 under HCI") + where);

        for (const ZeroCondition& z : se_zero_conditions(m)) {
            const MethodResult zr = comparative_method(z.apply(spec), m);
            t.expect(std::abs(zr.delta_se) < kOracleTol, label(m, "delta_se not zero when ") + z.name + where);
        }
        for (const ZeroCondition& z : sp_zero_conditions(m)) {
            const MethodResult zr = comparative_method(z.apply(spec), m);
            t.expect(std::abs(zr.delta_sp) < kOracleTol, label(m, "delta_sp not zero when ") + z.name + where);
        }

        const Monotony dir = monotony(m);
        for (int k = 0; k < 7; ++k) {
            PopulationSpec up = spec;
            PopulationSpec down = spec;
            kAxes[k].add(up, h);
            kAxes[k].add(down, -h);
            const MethodResult ru = comparative_method(up, m);
            const MethodResult rd = comparative_method(down, m);
            const double dse = ru.delta_se - rd.delta_se;
            const double dsp = ru.delta_sp - rd.delta_sp;
            if (dir.se[k] != 0) {
                t.expect(dir.se[k] * dse >= -kMonotoneSlack,
                         label(m, "delta_se monotony wrong along ") + kAxes[k].name + where);
            }
            if (dir.sp[k] != 0) {
                t.expect(dir.sp[k] * dsp >= -kMonotoneSlack,
                         label(m, "delta_sp monotony wrong along ") + kAxes[k].name + where);
            }
        }
    }
}

void check_dependence_findings(const PopulationSpec& spec, CheckTally& t) {
    const std::string where = " at " + describe(spec);
    const PopulationSpec hci = spec.with_covariances(0.0, 0.0);
    for (MethodId m : kDecomposable) {
        const MethodResult dep = comparative_method(spec, m);
        const MethodResult ind = comparative_method(hci, m);
        const ViolationTerms v = violation_terms(spec, m);
        const DeviationParts parts = decompose(spec, m);

        t.expect_close(dep.delta_se - ind.delta_se, parts.dependence_se, kOracleTol,
                       label(m, "delta_se shift vs dependence term") + where);
        t.expect_close(dep.delta_sp - ind.delta_sp, parts.dependence_sp, kOracleTol,
                       label(m, "delta_sp shift vs dependence term") + where);
        t.expect_close(parts.dependence_numerator, v.dependence, kOracleTol,
                       label(m, "dependence numerator") + where);

        if (std::abs(v.dependence) > kDecisionMargin) {
            t.expect((dep.delta_se <= ind.delta_se) == (v.dependence <= 0.0),
                     label(m, "Se ordering vs dependence sign") + where);
            t.expect((dep.delta_sp <= ind.delta_sp) == (v.dependence <= 0.0),
                     label(m, "Sp ordering vs dependence sign") + where);
        }
        if (std::abs(v.dependence - v.se_threshold) > kDecisionMargin) {
            t.expect((dep.delta_se >= 0.0) == (v.dependence >= v.se_threshold),
                     label(m, "Se overestimation threshold") + where);
        }
        if (std::abs(v.dependence - v.sp_threshold) > kDecisionMargin) {
            t.expect((dep.delta_sp > 0.0) == (v.dependence > v.sp_threshold),
                     label(m, "Sp overestimation threshold") + where);
        }
    }
}

std::string VerifyReport::summary() const {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "samples=%zu oracle_checks=%zu oracle_failures=%zu max_discrepancy=%.3g "
                  "finding_checks=%zu finding_failures=%zu",
                  samples, oracle.checks, oracle.failures, oracle.max_discrepancy, findings.checks,
                  findings.failures);
    return buf;
}

VerifyReport run_verification(const VerifyOptions& options) {
    VerifyReport report;
    report.samples = options.samples;
    SpecGenerator any(options.seed);
    SpecGenerator interior(options.seed ^ 0x9e3779b97f4a7c15ULL,
                           {.margin = 1e-3, .min_youden = 1e-3, .dependence_rate = 1.0, .covariance_shrink = 0.0});
    for (std::size_t i = 0; i < options.samples; ++i) {
        check_oracle_equivalence(any.next(), report.oracle);
        const PopulationSpec s = interior.next();
        check_hci_findings(s, report.findings);
        check_dependence_findings(s, report.findings);
    }
    return report;
}

}  // namespace refstd
