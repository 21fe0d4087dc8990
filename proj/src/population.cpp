#include "refstd/population.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "refstd/error.hpp"

namespace refstd {

namespace {

std::string fmt_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

bool is_probability(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

struct Box {
    Interval xi;
    Interval eps;
};

// Covariance of two Bernoulli variables with success probabilities a and b
// must keep all four cells of their 2x2 table in [0,1].
Interval bernoulli_covariance_range(double a, double b) {
    return {std::max(-a * b, -(1.0 - a) * (1.0 - b)), std::min(a, b) - a * b};
}

Box basic_box(const PopulationSpec& s) {
    return {bernoulli_covariance_range(s.se_x, s.se_z1), bernoulli_covariance_range(s.sp_x, s.sp_z1)};
}

void check_ranges(const PopulationSpec& s, std::vector<Violation>& out) {
    const std::pair<const char*, double> accuracies[] = {
        {"se_x", s.se_x}, {"sp_x", s.sp_x}, {"se_z1", s.se_z1},
        {"sp_z1", s.sp_z1}, {"se_z2", s.se_z2}, {"sp_z2", s.sp_z2},
    };
    for (const auto& [name, v] : accuracies) {
        if (!is_probability(v)) {
            out.push_back({ViolationKind::Range, name, std::string(name) + " outside [0,1]", v, v < 0.0 ? 0.0 : 1.0});
        }
    }
    if (!(std::isfinite(s.eta) && s.eta > 0.0 && s.eta < 1.0)) {
        out.push_back({ViolationKind::Range, "eta", "eta outside (0,1)", s.eta, s.eta <= 0.0 ? 0.0 : 1.0});
    }
    if (!std::isfinite(s.xi)) out.push_back({ViolationKind::Range, "xi", "xi not finite", s.xi, 0.0});
    if (!std::isfinite(s.eps)) out.push_back({ViolationKind::Range, "eps", "eps not finite", s.eps, 0.0});
}

void check_interval(const char* name, double v, const Interval& iv, std::vector<Violation>& out) {
    if (v > iv.hi + kProbTol) {
        out.push_back({ViolationKind::Covariance, name,
                       std::string(name) + " above upper bound " + fmt_num(iv.hi), v, iv.hi});
    } else if (v < iv.lo - kProbTol) {
        out.push_back({ViolationKind::Covariance, name,
                       std::string(name) + " below lower bound " + fmt_num(iv.lo), v, iv.lo});
    }
}

}  // namespace

PopulationSpec baseline_spec() noexcept {
    return {.se_x = 0.9, .sp_x = 0.9, .se_z1 = 0.6, .sp_z1 = 0.95, .se_z2 = 0.6, .sp_z2 = 0.95,
            .eta = 0.1, .xi = 0.0, .eps = 0.0};
}

YoudenIndex youden(double se, double sp) noexcept { return {se + sp - 1.0}; }

bool ValidationReport::only_covariance_violations() const noexcept {
    return !violations.empty() && std::all_of(violations.begin(), violations.end(), [](const Violation& v) {
        return v.kind == ViolationKind::Covariance;
    });
}

std::string ValidationReport::summary() const {
    std::string out;
    for (const auto& v : violations) {
        if (!out.empty()) out += "; ";
        out += v.message;
    }
    return out;
}

ValidationReport validate(const PopulationSpec& spec) {
    ValidationReport report;
    check_ranges(spec, report.violations);
    if (!report.ok()) return report;

    if (youden(spec.se_x, spec.sp_x).value <= 0.0) {
        report.violations.push_back(
            {ViolationKind::Youden, "se_x", "J_X <= 0", youden(spec.se_x, spec.sp_x).value, 0.0});
    }
    const Box box = basic_box(spec);
    check_interval("xi", spec.xi, box.xi, report.violations);
    check_interval("eps", spec.eps, box.eps, report.violations);
    return report;
}

void require_valid(const PopulationSpec& spec) {
    const ValidationReport report = validate(spec);
    if (report.ok()) return;
    const auto code = report.only_covariance_violations() ? ErrorCode::OutOfBounds : ErrorCode::InvalidSpec;
    throw Error(code, report.summary(), report.violations.front().field);
}

double JointDistribution::total() const noexcept {
    return std::accumulate(cells_.begin(), cells_.end(), 0.0);
}

JointDistribution unchecked_joint_distribution(const PopulationSpec& s) {
    JointDistribution jd;
    for (int y = 0; y <= 1; ++y) {
        const double weight = y == 1 ? s.eta : 1.0 - s.eta;
        const double cov = y == 1 ? s.xi : s.eps;
        const double px1 = y == 1 ? s.se_x : 1.0 - s.sp_x;
        const double pz1 = y == 1 ? s.se_z1 : 1.0 - s.sp_z1;
        const double pz2 = y == 1 ? s.se_z2 : 1.0 - s.sp_z2;
        for (int x = 0; x <= 1; ++x) {
            const double px = x == 1 ? px1 : 1.0 - px1;
            for (int z1 = 0; z1 <= 1; ++z1) {
                const double pa = z1 == 1 ? pz1 : 1.0 - pz1;
                // (-1)^(x - z1): concordant pairs gain the covariance, discordant lose it.
                const double pair = px * pa + (x == z1 ? cov : -cov);
                for (int z2 = 0; z2 <= 1; ++z2) {
                    const double pb = z2 == 1 ? pz2 : 1.0 - pz2;
                    jd.cells_[JointDistribution::index(x, z1, z2, y)] = weight * pair * pb;
                }
            }
        }
    }
    return jd;
}

JointDistribution joint_distribution(const PopulationSpec& spec) {
    require_valid(spec);
    return unchecked_joint_distribution(spec);
}

double lcm_half_plane_bound(const PopulationSpec& s) noexcept {
    return s.eta * (1.0 - s.eta) * (1.0 - s.se_x - s.sp_x) * (1.0 - s.se_z1 - s.sp_z1);
}

CovarianceBounds admissible_bounds(const PopulationSpec& spec, ConstraintContext context) {
    std::vector<Violation> range_errors;
    check_ranges(spec, range_errors);
    if (!range_errors.empty()) {
        throw Error(ErrorCode::InvalidSpec, range_errors.front().message, range_errors.front().field);
    }

    const Box box = basic_box(spec);
    CovarianceBounds out{box.xi, box.eps, context};
    const double rhs = lcm_half_plane_bound(spec);
    const double eta = spec.eta;
    switch (context) {
        case ConstraintContext::BasicJoint:
            break;
        case ConstraintContext::LcmHci:
            // eta*xi + (1-eta)*eps >= -rhs
            out.xi.lo = std::max(out.xi.lo, -rhs / eta);
            out.eps.lo = std::max(out.eps.lo, -rhs / (1.0 - eta));
            break;
        case ConstraintContext::LcmHciBar:
            // eta*xi + (1-eta)*eps <= rhs
            out.xi.hi = std::min(out.xi.hi, rhs / eta);
            out.eps.hi = std::min(out.eps.hi, rhs / (1.0 - eta));
            break;
    }
    if (out.xi.lo > out.xi.hi || out.eps.lo > out.eps.hi) {
        throw Error(ErrorCode::InvalidSpec,
                    std::string("no admissible covariance in context ") + to_string(context), "xi");
    }
    return out;
}

bool is_feasible(const PopulationSpec& spec, ConstraintContext context, double tol) {
    std::vector<Violation> range_errors;
    check_ranges(spec, range_errors);
    if (!range_errors.empty()) return false;

    const Box box = basic_box(spec);
    if (!box.xi.contains(spec.xi, tol) || !box.eps.contains(spec.eps, tol)) return false;
    const double combined = spec.eta * spec.xi + (1.0 - spec.eta) * spec.eps;
    const double rhs = lcm_half_plane_bound(spec);
    switch (context) {
        case ConstraintContext::BasicJoint: return true;
        case ConstraintContext::LcmHci: return combined >= -rhs - tol;
        case ConstraintContext::LcmHciBar: return combined <= rhs + tol;
    }
    return false;
}

const char* to_string(ConstraintContext context) noexcept {
    switch (context) {
        case ConstraintContext::BasicJoint: return "basic_joint";
        case ConstraintContext::LcmHci: return "lcm_hci";
        case ConstraintContext::LcmHciBar: return "lcm_hcibar";
    }
    return "basic_joint";
}

}  // namespace refstd
