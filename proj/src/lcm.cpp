#include "refstd/lcm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "refstd/error.hpp"

namespace refstd {

namespace {

constexpr double kEtaBracketLo = 1e-9;
constexpr double kEtaBracketHi = 0.5 - 1e-9;
constexpr int kEtaScanIntervals = 2000;
constexpr double kEtaTolerance = 1e-12;

[[noreturn]] void undefined(const std::string& what) {
    throw Error(ErrorCode::UndefinedEstimator, "latent class estimator undefined: " + what, "moments");
}

double checked_sqrt(double radicand, const char* what) {
    if (!(radicand >= 0.0) || !std::isfinite(radicand)) undefined(std::string("negative radicand in ") + what);
    return std::sqrt(radicand);
}

// Lower root of eta^2 - eta + 1/(4+w^2) = 0, i.e. 1/2 - sqrt(1/4 - 1/(4+w^2)),
// rearranged to avoid cancellation for large |w|.
double lower_prevalence_root(double w) {
    const double s = std::sqrt(4.0 + w * w);
    return 2.0 / (s * (s + std::abs(w)));
}

double upper_prevalence_root(double w) { return 1.0 - lower_prevalence_root(w); }

double clamp01(double v, bool& fired) {
    if (v < 0.0 || v > 1.0) fired = true;
    return std::clamp(v, 0.0, 1.0);
}

void finalize(LcmEstimate& e) {
    bool fired = false;
    for (int i = 0; i < 3; ++i) {
        e.se[i] = clamp01(e.raw_se[i], fired);
        e.sp[i] = clamp01(e.raw_sp[i], fired);
    }
    e.eta_hat = clamp01(e.raw_eta, fired);
    e.clamped = fired;
}

double require_usable_eta(std::optional<double> plugin_eta, double estimated) {
    const double eta = plugin_eta.value_or(estimated);
    if (!(eta > 0.0 && eta < 1.0)) undefined("prevalence outside (0,1)");
    return eta;
}

// E[(X1-p1)(X2-p2)(X3-p3)] under the dependence model, expressed through the
// observed moments, minus the observed value.
double dep_residual_unchecked(const MomentSet& m, double xi, double eps, double eta, double independent_a12) {
    const double odds_term = (1.0 - 2.0 * eta) / std::sqrt(eta * (1.0 - eta));
    const double lhs = odds_term * std::sqrt(m.a13 * m.a23 * independent_a12) +
                       (xi - eps) * std::sqrt(eta * (1.0 - eta) * m.a13 * m.a23 / independent_a12);
    return lhs - m.third_central_moment();
}

double solve_dep_prevalence(const MomentSet& m, double xi, double eps) {
    auto f = [&](double eta) { return lcm_dep_prevalence_residual(m, xi, eps, eta); };

    const double step = (kEtaBracketHi - kEtaBracketLo) / kEtaScanIntervals;
    std::optional<double> prev_x;
    std::optional<double> prev_f;
    for (int i = 0; i <= kEtaScanIntervals; ++i) {
        const double x = i == kEtaScanIntervals ? kEtaBracketHi : kEtaBracketLo + step * i;
        const auto fx = f(x);
        if (fx && *fx == 0.0) return x;
        if (fx && prev_f && ((*prev_f < 0.0) != (*fx < 0.0))) {
            double lo = *prev_x;
            double hi = x;
            double flo = *prev_f;
            while (hi - lo > kEtaTolerance) {
                const double mid = 0.5 * (lo + hi);
                const auto fm = f(mid);
                if (!fm) break;
                if (*fm == 0.0) return mid;
                if ((*fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = *fm;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        prev_x = fx ? std::optional<double>(x) : std::nullopt;
        prev_f = fx;
    }
    throw Error(ErrorCode::NoRoot, "prevalence equation has no root in (0, 0.5)", "eta");
}

}  // namespace

MomentSet MomentSet::from_probabilities(double p1, double p2, double p3, double p12, double p13, double p23,
                                        double p123) noexcept {
    MomentSet m;
    m.p1 = p1;
    m.p2 = p2;
    m.p3 = p3;
    m.p12 = p12;
    m.p13 = p13;
    m.p23 = p23;
    m.p123 = p123;
    m.a12 = p12 - p1 * p2;
    m.a13 = p13 - p1 * p3;
    m.a23 = p23 - p2 * p3;
    return m;
}

double MomentSet::third_central_moment() const noexcept {
    return p123 - p12 * p3 - p13 * p2 - p23 * p1 + 2.0 * p1 * p2 * p3;
}

MomentSet population_moments(const PopulationSpec& s) {
    require_valid(s);
    const double eta = s.eta;
    const double q = 1.0 - eta;
    const double fx = 1.0 - s.sp_x;
    const double f1 = 1.0 - s.sp_z1;
    const double f2 = 1.0 - s.sp_z2;
    const double dep12 = eta * s.xi + q * s.eps;
    const double dep123 = eta * s.se_z2 * s.xi + q * f2 * s.eps;
    return MomentSet::from_probabilities(eta * s.se_x + q * fx,
                                         eta * s.se_z1 + q * f1,
                                         eta * s.se_z2 + q * f2,
                                         eta * s.se_x * s.se_z1 + q * fx * f1 + dep12,
                                         eta * s.se_x * s.se_z2 + q * fx * f2,
                                         eta * s.se_z1 * s.se_z2 + q * f1 * f2,
                                         eta * s.se_x * s.se_z1 * s.se_z2 + q * fx * f1 * f2 + dep123);
}

const char* to_string(LcmScenario scenario) noexcept {
    switch (scenario) {
        case LcmScenario::MatchedHci: return "matched_hci";
        case LcmScenario::MatchedDep: return "matched_dep";
        case LcmScenario::LcmHciOnDepPopulation: return "lcm_hci_on_dep_population";
        case LcmScenario::LcmDepOnHciPopulation: return "lcm_dep_on_hci_population";
    }
    return "matched_hci";
}

const char* to_string(EtaSource source) noexcept {
    return source == EtaSource::True ? "true" : "estimated";
}

LcmEstimate lcm_hci_estimate(const MomentSet& m, std::optional<double> plugin_eta) {
    if (m.a12 == 0.0 || m.a13 == 0.0 || m.a23 == 0.0) undefined("zero pairwise covariance");
    const double product = m.a12 * m.a13 * m.a23;
    const double v = m.third_central_moment() / checked_sqrt(product, "a12*a13*a23");

    LcmEstimate e;
    e.scenario = LcmScenario::MatchedHci;
    e.raw_eta = lower_prevalence_root(v);
    e.eta_upper_root = upper_prevalence_root(v);
    const double eta = require_usable_eta(plugin_eta, e.raw_eta);
    e.eta_used = eta;

    const std::array<double, 3> p{m.p1, m.p2, m.p3};
    // sqrt(a_ij a_ik / a_jk) for i = 1, 2, 3
    const std::array<double, 3> spread{
        checked_sqrt(m.a12 * m.a13 / m.a23, "test 1"),
        checked_sqrt(m.a12 * m.a23 / m.a13, "test 2"),
        checked_sqrt(m.a13 * m.a23 / m.a12, "test 3"),
    };
    const double odds_pos = std::sqrt((1.0 - eta) / eta);
    const double odds_neg = std::sqrt(eta / (1.0 - eta));
    for (int i = 0; i < 3; ++i) {
        e.raw_se[i] = p[i] + spread[i] * odds_pos;
        e.raw_sp[i] = 1.0 - p[i] + spread[i] * odds_neg;
    }
    finalize(e);
    return e;
}

std::optional<double> lcm_dep_prevalence_residual(const MomentSet& m, double xi, double eps, double eta) noexcept {
    if (!(eta > 0.0 && eta < 1.0)) return std::nullopt;
    const double independent_a12 = m.a12 - eta * xi - (1.0 - eta) * eps;
    if (!(independent_a12 > 0.0) || !(m.a13 * m.a23 > 0.0)) return std::nullopt;
    return dep_residual_unchecked(m, xi, eps, eta, independent_a12);
}

LcmEstimate lcm_dep_estimate(const MomentSet& m, double xi, double eps, std::optional<double> plugin_eta) {
    if (m.a13 == 0.0 || m.a23 == 0.0) undefined("zero pairwise covariance");
    if (!(m.a13 * m.a23 > 0.0)) undefined("negative radicand in a13*a23");

    LcmEstimate e;
    e.scenario = LcmScenario::MatchedDep;
    if (xi == eps) {
        // Equal covariances: the a12 correction no longer depends on eta.
        const double independent_a12 = m.a12 - xi;
        if (independent_a12 == 0.0) undefined("zero corrected a12");
        const double w = m.third_central_moment() / checked_sqrt(m.a13 * m.a23 * independent_a12, "prevalence");
        e.raw_eta = lower_prevalence_root(w);
        e.eta_upper_root = upper_prevalence_root(w);
    } else {
        e.raw_eta = solve_dep_prevalence(m, xi, eps);
        e.eta_upper_root = 1.0 - e.raw_eta;
    }
    const double eta = require_usable_eta(plugin_eta, e.raw_eta);
    e.eta_used = eta;

    const double independent_a12 = m.a12 - eta * xi - (1.0 - eta) * eps;
    if (independent_a12 == 0.0) undefined("zero corrected a12");
    const double pos = (1.0 - eta) / eta;
    const double neg = eta / (1.0 - eta);
    // Each radicand is the HCI one with a12 replaced by a12 - eta*xi - (1-eta)*eps.
    const double r1 = m.a13 * independent_a12 / m.a23;
    const double r2 = m.a23 * independent_a12 / m.a13;
    const double r3 = m.a13 * m.a23 / independent_a12;

    e.raw_se = {m.p1 + checked_sqrt(pos * r1, "Se1"), m.p2 + checked_sqrt(pos * r2, "Se2"),
                m.p3 + checked_sqrt(pos * r3, "Se3")};
    e.raw_sp = {1.0 - m.p1 + checked_sqrt(neg * r1, "Sp1"), 1.0 - m.p2 + checked_sqrt(neg * r2, "Sp2"),
                1.0 - m.p3 + checked_sqrt(neg * r3, "Sp3")};
    finalize(e);
    return e;
}

LcmDeviation lcm_scenario_deviation(const PopulationSpec& spec, LcmScenario scenario, double xi_model,
                                    double eps_model, EtaSource eta_source) {
    require_valid(spec);
    const std::optional<double> plugin =
        eta_source == EtaSource::True ? std::optional<double>(spec.eta) : std::nullopt;

    LcmDeviation out;
    switch (scenario) {
        case LcmScenario::LcmHciOnDepPopulation: {
            if (!is_feasible(spec, ConstraintContext::LcmHci)) {
                throw Error(ErrorCode::OutOfBounds,
                            "covariances violate eta*xi+(1-eta)*eps >= -eta(1-eta)(1-Se_X-Sp_X)(1-Se_Z1-Sp_Z1)",
                            "xi");
            }
            out.estimate = lcm_hci_estimate(population_moments(spec), plugin);
            break;
        }
        case LcmScenario::LcmDepOnHciPopulation: {
            if (!spec.conditionally_independent()) {
                throw Error(ErrorCode::InvalidSpec, "population must be conditionally independent", "xi");
            }
            if (!is_feasible(spec.with_covariances(xi_model, eps_model), ConstraintContext::LcmHciBar)) {
                throw Error(ErrorCode::OutOfBounds,
                            "model covariances violate eta*xi+(1-eta)*eps <= eta(1-eta)(1-Se_X-Sp_X)(1-Se_Z1-Sp_Z1)",
                            "xi_model");
            }
            out.estimate = lcm_dep_estimate(population_moments(spec), xi_model, eps_model, plugin);
            break;
        }
        default:
            throw Error(ErrorCode::BadRequest, "scenario must be a model/population mismatch", "scenario");
    }
    out.estimate.scenario = scenario;
    out.delta_se_x = out.estimate.se[0] - spec.se_x;
    out.delta_sp_x = out.estimate.sp[0] - spec.sp_x;
    out.delta_eta = out.estimate.eta_hat - spec.eta;
    return out;
}

MethodResult lcm_method(const PopulationSpec& spec, MethodId method, EtaSource eta_source) {
    LcmDeviation dev;
    PopulationSpec truth = spec;
    if (method == MethodId::LCM_HCI) {
        dev = lcm_scenario_deviation(spec, LcmScenario::LcmHciOnDepPopulation, 0.0, 0.0, eta_source);
    } else if (method == MethodId::LCM_HCIBAR) {
        truth = spec.with_covariances(0.0, 0.0);
        dev = lcm_scenario_deviation(truth, LcmScenario::LcmDepOnHciPopulation, spec.xi, spec.eps, eta_source);
    } else {
        throw Error(ErrorCode::UnsupportedMethod, std::string(to_string(method)) + " is not an LCM method", "method");
    }
    MethodResult r;
    r.method = method;
    r.se = dev.estimate.se[0];
    r.sp = dev.estimate.sp[0];
    r.delta_se = dev.delta_se_x;
    r.delta_sp = dev.delta_sp_x;
    r.hci_assumed = method == MethodId::LCM_HCI;
    r.clamped = dev.estimate.clamped;
    r.raw_se = dev.estimate.raw_se[0];
    r.raw_sp = dev.estimate.raw_sp[0];
    return r;
}

}  // namespace refstd
