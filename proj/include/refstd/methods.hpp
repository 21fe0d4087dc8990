#pragma once

// Closed-form sensitivity/specificity of the index test X when it is
// evaluated against an imperfect reference built from Z1 and Z2:
//
//   IGS    reference is Z1
//   CRS_A  reference is Z1 AND Z2
//   CRS_O  reference is Z1 OR Z2
//   DA     X vs Z1, disagreements resolved by Z2
//
// All formulas carry the X/Z1 conditional covariances; the conditionally
// independent case is their specialization at xi = eps = 0.

#include <optional>
#include <string>
#include <string_view>

#include "refstd/population.hpp"

namespace refstd {

enum class MethodId { IGS, CRS_A, CRS_O, DA, LCM_HCI, LCM_HCIBAR };

inline constexpr MethodId kComparativeMethods[] = {MethodId::IGS, MethodId::CRS_A, MethodId::CRS_O, MethodId::DA};
inline constexpr MethodId kAllMethods[] = {MethodId::IGS, MethodId::CRS_A, MethodId::CRS_O,
                                           MethodId::DA,  MethodId::LCM_HCI, MethodId::LCM_HCIBAR};

std::string_view to_string(MethodId id) noexcept;
/// Case-insensitive; accepts "igs", "crs_a", "crs-a", "lcm_hcibar", ...
std::optional<MethodId> parse_method(std::string_view tag) noexcept;
bool is_lcm(MethodId id) noexcept;

struct MethodResult {
    MethodId method = MethodId::IGS;
    double se = 0.0;
    double sp = 0.0;
    double delta_se = 0.0;
    double delta_sp = 0.0;
    bool hci_assumed = true;
    bool clamped = false;
    /// Pre-clamp estimates (LCM methods only).
    std::optional<double> raw_se;
    std::optional<double> raw_sp;

    friend bool operator==(const MethodResult&, const MethodResult&) = default;
};

/// Split of a deviation into the reference's imperfection and the dependence term.
struct DeviationParts {
    double imperfection_se = 0.0;
    double dependence_se = 0.0;
    double imperfection_sp = 0.0;
    double dependence_sp = 0.0;
    /// Numerator of the dependence term, e.g. eta*xi + (1-eta)*eps for IGS.
    double dependence_numerator = 0.0;
    double p_reference_positive = 0.0;
};

MethodResult igs(const PopulationSpec& spec);
MethodResult crs_and(const PopulationSpec& spec);
MethodResult crs_or(const PopulationSpec& spec);
MethodResult discrepant_analysis(const PopulationSpec& spec);

/// Dispatch over the four comparative methods. Throws UnsupportedMethod for LCM tags.
MethodResult comparative_method(const PopulationSpec& spec, MethodId method);

/// Additive decomposition; only IGS, CRS_A and CRS_O decompose.
DeviationParts decompose(const PopulationSpec& spec, MethodId method);

/// The reference variable of a method recast as an imperfect gold standard.
struct TildeReference {
    double se_tilde = 0.0;
    double sp_tilde = 0.0;
    double xi_tilde = 0.0;
    double eps_tilde = 0.0;
};

TildeReference tilde_reference(const PopulationSpec& spec, MethodId method);

/// IGS formulas applied to an arbitrary reference described by its accuracy and
/// its conditional covariances with X.
MethodResult igs_against(const PopulationSpec& spec, const TildeReference& reference, MethodId tag);

/// CRS_A, CRS_O and DA evaluated through the IGS formulas with their tilde reference.
MethodResult unified_igs_equivalence(const PopulationSpec& spec, MethodId method);

}  // namespace refstd
