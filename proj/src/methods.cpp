#include "refstd/methods.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "refstd/error.hpp"

namespace refstd {

namespace {

void require_nondegenerate(double p_positive, std::string_view what) {
    if (!(p_positive > 0.0 && p_positive < 1.0)) {
        throw Error(ErrorCode::DegenerateReference,
                    std::string("P(") + std::string(what) + "=1) is 0 or 1", std::string(what));
    }
}

MethodResult finish(const PopulationSpec& s, MethodId id, double delta_se, double delta_sp) {
    MethodResult r;
    r.method = id;
    r.delta_se = delta_se;
    r.delta_sp = delta_sp;
    r.se = s.se_x + delta_se;
    r.sp = s.sp_x + delta_sp;
    r.hci_assumed = s.conditionally_independent();
    return r;
}

// Shared shape of IGS, CRS_A and CRS_O: each deviation is
// (-imperfection * J_X + dependence) / P(reference = r).
struct AdditiveForm {
    double p_positive;
    double se_imperfection;  // multiplies -J_X
    double sp_imperfection;  // multiplies -J_X
    double dependence;
};

AdditiveForm igs_form(const PopulationSpec& s) {
    const double eta = s.eta;
    return {eta * s.se_z1 + (1.0 - eta) * (1.0 - s.sp_z1),
            (1.0 - eta) * (1.0 - s.sp_z1),
            eta * (1.0 - s.se_z1),
            eta * s.xi + (1.0 - eta) * s.eps};
}

AdditiveForm crs_and_form(const PopulationSpec& s) {
    const double eta = s.eta;
    return {eta * s.se_z1 * s.se_z2 + (1.0 - eta) * (1.0 - s.sp_z1) * (1.0 - s.sp_z2),
            (1.0 - eta) * (1.0 - s.sp_z1) * (1.0 - s.sp_z2),
            eta * (1.0 - s.se_z1 * s.se_z2),
            eta * s.se_z2 * s.xi + (1.0 - eta) * (1.0 - s.sp_z2) * s.eps};
}

AdditiveForm crs_or_form(const PopulationSpec& s) {
    const double eta = s.eta;
    return {eta * (s.se_z1 + s.se_z2 - s.se_z1 * s.se_z2) + (1.0 - eta) * (1.0 - s.sp_z1 * s.sp_z2),
            (1.0 - eta) * (1.0 - s.sp_z1 * s.sp_z2),
            eta * (1.0 - s.se_z1) * (1.0 - s.se_z2),
            eta * (1.0 - s.se_z2) * s.xi + (1.0 - eta) * s.sp_z2 * s.eps};
}

AdditiveForm additive_form(const PopulationSpec& s, MethodId id) {
    switch (id) {
        case MethodId::IGS: return igs_form(s);
        case MethodId::CRS_A: return crs_and_form(s);
        case MethodId::CRS_O: return crs_or_form(s);
        default: break;
    }
    throw Error(ErrorCode::UnsupportedMethod,
                std::string("no additive decomposition for ") + std::string(to_string(id)), "method");
}

MethodResult from_additive(const PopulationSpec& s, MethodId id) {
    require_valid(s);
    const AdditiveForm f = additive_form(s, id);
    require_nondegenerate(f.p_positive, "reference");
    const double jx = youden(s.se_x, s.sp_x).value;
    const double p_negative = 1.0 - f.p_positive;
#ifdef REFSTD_MUTANT_IGS_SIGN
    // Mutation-testing build only: wrong sign on the IGS Se imperfection term.
    const double se_sign = id == MethodId::IGS ? -1.0 : 1.0;
#else
    const double se_sign = 1.0;
#endif
    return finish(s, id, (-se_sign * f.se_imperfection * jx + f.dependence) / f.p_positive,
                  (-f.sp_imperfection * jx + f.dependence) / p_negative);
}

}  // namespace

std::string_view to_string(MethodId id) noexcept {
    switch (id) {
        case MethodId::IGS: return "IGS";
        case MethodId::CRS_A: return "CRS_A";
        case MethodId::CRS_O: return "CRS_O";
        case MethodId::DA: return "DA";
        case MethodId::LCM_HCI: return "LCM_HCI";
        case MethodId::LCM_HCIBAR: return "LCM_HCIBAR";
    }
    return "IGS";
}

std::optional<MethodId> parse_method(std::string_view tag) noexcept {
    std::string norm;
    norm.reserve(tag.size());
    for (char c : tag) norm.push_back(c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    for (MethodId id : kAllMethods) {
        if (norm == to_string(id)) return id;
    }
    return std::nullopt;
}

bool is_lcm(MethodId id) noexcept { return id == MethodId::LCM_HCI || id == MethodId::LCM_HCIBAR; }

MethodResult igs(const PopulationSpec& spec) { return from_additive(spec, MethodId::IGS); }
MethodResult crs_and(const PopulationSpec& spec) { return from_additive(spec, MethodId::CRS_A); }
MethodResult crs_or(const PopulationSpec& spec) { return from_additive(spec, MethodId::CRS_O); }

MethodResult discrepant_analysis(const PopulationSpec& s) {
    require_valid(s);
    const double eta = s.eta;
    const double dep11 = eta * s.xi + (1.0 - eta) * s.eps;
    const double dep_pos = eta * s.se_z2 * s.xi + (1.0 - eta) * (1.0 - s.sp_z2) * s.eps;
    const double dep_neg = eta * (1.0 - s.se_z2) * s.xi + (1.0 - eta) * s.sp_z2 * s.eps;

    // Reference positive: agreement on positive, or discordant pair resolved positive by Z2.
    const double p_x1_z11 = eta * s.se_x * s.se_z1 + (1.0 - eta) * (1.0 - s.sp_x) * (1.0 - s.sp_z1) + dep11;
    const double p_x1_z10_z21 =
        eta * s.se_x * (1.0 - s.se_z1) * s.se_z2 + (1.0 - eta) * (1.0 - s.sp_x) * s.sp_z1 * (1.0 - s.sp_z2) - dep_pos;
    const double p_x0_z11_z21 =
        eta * (1.0 - s.se_x) * s.se_z1 * s.se_z2 + (1.0 - eta) * s.sp_x * (1.0 - s.sp_z1) * (1.0 - s.sp_z2) - dep_pos;
    const double p_ref1 = p_x1_z11 + p_x1_z10_z21 + p_x0_z11_z21;
    require_nondegenerate(p_ref1, "Z_DA");

    const double p_x0_z10 = eta * (1.0 - s.se_x) * (1.0 - s.se_z1) + (1.0 - eta) * s.sp_x * s.sp_z1 + dep11;
    const double p_x0_z11_z20 =
        eta * (1.0 - s.se_x) * s.se_z1 * (1.0 - s.se_z2) + (1.0 - eta) * s.sp_x * (1.0 - s.sp_z1) * s.sp_z2 - dep_neg;
    const double p_x1_z10_z20 =
        eta * s.se_x * (1.0 - s.se_z1) * (1.0 - s.se_z2) + (1.0 - eta) * (1.0 - s.sp_x) * s.sp_z1 * s.sp_z2 - dep_neg;
    const double p_ref0 = 1.0 - p_ref1;

    const double delta_se = ((1.0 - s.se_x) * (p_x1_z11 + p_x1_z10_z21) - s.se_x * p_x0_z11_z21) / p_ref1;
    const double delta_sp = ((1.0 - s.sp_x) * (p_x0_z10 + p_x0_z11_z20) - s.sp_x * p_x1_z10_z20) / p_ref0;
    return finish(s, MethodId::DA, delta_se, delta_sp);
}

MethodResult comparative_method(const PopulationSpec& spec, MethodId method) {
    switch (method) {
        case MethodId::IGS: return igs(spec);
        case MethodId::CRS_A: return crs_and(spec);
        case MethodId::CRS_O: return crs_or(spec);
        case MethodId::DA: return discrepant_analysis(spec);
        default: break;
    }
    throw Error(ErrorCode::UnsupportedMethod,
                std::string(to_string(method)) + " is not a comparative method", "method");
}

DeviationParts decompose(const PopulationSpec& s, MethodId method) {
    require_valid(s);
    const AdditiveForm f = additive_form(s, method);
    require_nondegenerate(f.p_positive, "reference");
    const double jx = youden(s.se_x, s.sp_x).value;
    const double p_negative = 1.0 - f.p_positive;
    return {-f.se_imperfection * jx / f.p_positive, f.dependence / f.p_positive,
            -f.sp_imperfection * jx / p_negative,   f.dependence / p_negative,
            f.dependence,                           f.p_positive};
}

TildeReference tilde_reference(const PopulationSpec& s, MethodId method) {
    if (is_lcm(method)) {
        throw Error(ErrorCode::UnsupportedMethod,
                    std::string(to_string(method)) + " has no imperfect-reference form", "method");
    }
    const JointDistribution jd = joint_distribution(s);

    // Accuracy of the composite reference from the joint table.
    auto reference = [method](int x, int z1, int z2) -> int {
        switch (method) {
            case MethodId::IGS: return z1;
            case MethodId::CRS_A: return z1 & z2;
            case MethodId::CRS_O: return z1 | z2;
            default: return (x & z1) | (x & (1 - z1) & z2) | ((1 - x) & z1 & z2);
        }
    };
    double ref1_y1 = 0.0;
    double ref0_y0 = 0.0;
    for (int x = 0; x <= 1; ++x)
        for (int z1 = 0; z1 <= 1; ++z1)
            for (int z2 = 0; z2 <= 1; ++z2) {
                if (reference(x, z1, z2) == 1) ref1_y1 += jd(x, z1, z2, 1);
                else ref0_y0 += jd(x, z1, z2, 0);
            }

    TildeReference t;
    t.se_tilde = ref1_y1 / s.eta;
    t.sp_tilde = ref0_y0 / (1.0 - s.eta);
    switch (method) {
        case MethodId::IGS:
            t.xi_tilde = s.xi;
            t.eps_tilde = s.eps;
            break;
        case MethodId::CRS_A:
            t.xi_tilde = s.xi * s.se_z2;
            t.eps_tilde = s.eps * (1.0 - s.sp_z2);
            break;
        case MethodId::CRS_O:
            t.xi_tilde = s.xi * (1.0 - s.se_z2);
            t.eps_tilde = s.eps * s.sp_z2;
            break;
        default:
            t.xi_tilde = s.se_x * (1.0 - s.se_x) * (s.se_z1 + s.se_z2 * (1.0 - 2.0 * s.se_z1)) +
                         s.xi * (1.0 - s.se_x - s.se_z2 + 2.0 * s.se_x * s.se_z2);
            t.eps_tilde = s.sp_x * (1.0 - s.sp_x) * (s.sp_z1 + s.sp_z2 * (1.0 - 2.0 * s.sp_z1)) +
                          s.eps * (1.0 - s.sp_x - s.sp_z2 + 2.0 * s.sp_x * s.sp_z2);
            break;
    }
    return t;
}

MethodResult igs_against(const PopulationSpec& s, const TildeReference& ref, MethodId tag) {
    const double eta = s.eta;
    const double p_positive = eta * ref.se_tilde + (1.0 - eta) * (1.0 - ref.sp_tilde);
    require_nondegenerate(p_positive, "reference");
    const double jx = youden(s.se_x, s.sp_x).value;
    const double dependence = eta * ref.xi_tilde + (1.0 - eta) * ref.eps_tilde;
    const double delta_se = (-(1.0 - eta) * (1.0 - ref.sp_tilde) * jx + dependence) / p_positive;
    const double delta_sp = (-eta * (1.0 - ref.se_tilde) * jx + dependence) / (1.0 - p_positive);
    return finish(s, tag, delta_se, delta_sp);
}

MethodResult unified_igs_equivalence(const PopulationSpec& spec, MethodId method) {
    if (method == MethodId::IGS || is_lcm(method)) {
        throw Error(ErrorCode::UnsupportedMethod,
                    "unified form is defined for CRS_A, CRS_O and DA", "method");
    }
    return igs_against(spec, tilde_reference(spec, method), method);
}

}  // namespace refstd
