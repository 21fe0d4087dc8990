#include "refstd/oracle.hpp"

#include <string>

#include "refstd/error.hpp"

namespace refstd::oracle {

namespace {

void require_comparative(MethodId method) {
    if (is_lcm(method)) {
        throw Error(ErrorCode::UnsupportedMethod,
                    std::string(to_string(method)) + " has no Boolean reference rule", "method");
    }
}

}  // namespace

OutcomeTable outcome_table(const PopulationSpec& spec) {
    const JointDistribution jd = joint_distribution(spec);
    OutcomeTable t;
    std::size_t i = 0;
    for (int x = 0; x <= 1; ++x)
        for (int z1 = 0; z1 <= 1; ++z1)
            for (int z2 = 0; z2 <= 1; ++z2)
                for (int y = 0; y <= 1; ++y) {
                    const double p = jd(x, z1, z2, y);
                    t.rows[i++] = {x, z1, z2, y, p};
                    t.observable[static_cast<std::size_t>((x << 2) | (z1 << 1) | z2)] += p;
                }
    return t;
}

int reference_value(MethodId method, int x, int z1, int z2) {
    switch (method) {
        case MethodId::IGS: return z1;
        case MethodId::CRS_A: return (z1 == 1 && z2 == 1) ? 1 : 0;
        case MethodId::CRS_O: return (z1 == 1 || z2 == 1) ? 1 : 0;
        case MethodId::DA:
            // Agreement stands; disagreement is settled by the resolver Z2.
            if (x == z1) return x;
            return z2;
        default: break;
    }
    require_comparative(method);
    return 0;
}

MethodResult oracle_method_accuracy(const PopulationSpec& spec, MethodId method) {
    require_comparative(method);
    const OutcomeTable t = outcome_table(spec);
    double ref_pos = 0.0, x_pos_ref_pos = 0.0;
    double ref_neg = 0.0, x_neg_ref_neg = 0.0;
    for (const OutcomeRow& r : t.rows) {
        if (reference_value(method, r.x, r.z1, r.z2) == 1) {
            ref_pos += r.probability;
            if (r.x == 1) x_pos_ref_pos += r.probability;
        } else {
            ref_neg += r.probability;
            if (r.x == 0) x_neg_ref_neg += r.probability;
        }
    }
    if (!(ref_pos > 0.0 && ref_neg > 0.0)) {
        throw Error(ErrorCode::DegenerateReference, "reference is constant", "reference");
    }
    MethodResult out;
    out.method = method;
    out.se = x_pos_ref_pos / ref_pos;
    out.sp = x_neg_ref_neg / ref_neg;
    out.delta_se = out.se - spec.se_x;
    out.delta_sp = out.sp - spec.sp_x;
    out.hci_assumed = spec.xi == 0.0 && spec.eps == 0.0;
    return out;
}

MomentSet oracle_lcm_moments(const PopulationSpec& spec) {
    const OutcomeTable t = outcome_table(spec);
    double p1 = 0, p2 = 0, p3 = 0, p12 = 0, p13 = 0, p23 = 0, p123 = 0;
    for (const OutcomeRow& r : t.rows) {
        const double p = r.probability;
        if (r.x) p1 += p;
        if (r.z1) p2 += p;
        if (r.z2) p3 += p;
        if (r.x && r.z1) p12 += p;
        if (r.x && r.z2) p13 += p;
        if (r.z1 && r.z2) p23 += p;
        if (r.x && r.z1 && r.z2) p123 += p;
    }
    return MomentSet::from_probabilities(p1, p2, p3, p12, p13, p23, p123);
}

std::pair<double, double> oracle_tilde_covariance(const PopulationSpec& spec, MethodId method) {
    require_comparative(method);
    const OutcomeTable t = outcome_table(spec);
    // Per class: P(Y=y), E[X 1{Y=y}], E[Zref 1{Y=y}], E[X Zref 1{Y=y}]
    std::array<double, 2> py{}, ex{}, ez{}, exz{};
    for (const OutcomeRow& r : t.rows) {
        const int z = reference_value(method, r.x, r.z1, r.z2);
        py[r.y] += r.probability;
        ex[r.y] += r.probability * r.x;
        ez[r.y] += r.probability * z;
        exz[r.y] += r.probability * r.x * z;
    }
    auto cov = [&](int y) {
        return exz[y] / py[y] - (ex[y] / py[y]) * (ez[y] / py[y]);
    };
    return {cov(1), cov(0)};
}

}  // namespace refstd::oracle
