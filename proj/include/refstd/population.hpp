#pragma once

// Population model: three binary tests (index test X, references Z1 and Z2)
// and a latent binary condition Y. X and Z1 may be conditionally dependent
// given Y (covariances xi for Y=1, eps for Y=0); Z2 is conditionally
// independent of both.

#include <array>
#include <string>
#include <vector>

namespace refstd {

/// Absolute tolerance for comparisons between closed-form probabilities.
inline constexpr double kProbTol = 1e-12;

struct PopulationSpec {
    double se_x = 0.0;
    double sp_x = 0.0;
    double se_z1 = 0.0;
    double sp_z1 = 0.0;
    double se_z2 = 0.0;
    double sp_z2 = 0.0;
    double eta = 0.0;  ///< prevalence P(Y=1)
    double xi = 0.0;   ///< cov(X, Z1 | Y=1)
    double eps = 0.0;  ///< cov(X, Z1 | Y=0)

    bool conditionally_independent() const noexcept { return xi == 0.0 && eps == 0.0; }
    PopulationSpec with_covariances(double new_xi, double new_eps) const noexcept {
        PopulationSpec s = *this;
        s.xi = new_xi;
        s.eps = new_eps;
        return s;
    }

    friend bool operator==(const PopulationSpec&, const PopulationSpec&) = default;
};

/// Setting used throughout the worked example: Se_X=Sp_X=0.9,
/// Se_Z=0.6, Sp_Z=0.95 for both references, prevalence 0.1, no dependence.
PopulationSpec baseline_spec() noexcept;

struct YoudenIndex {
    double value = 0.0;
};

YoudenIndex youden(double se, double sp) noexcept;

enum class ViolationKind {
    Range,       ///< accuracy or prevalence outside its domain
    Youden,      ///< index test not informative (J_X <= 0)
    Covariance,  ///< xi or eps outside the admissible box
};

struct Violation {
    ViolationKind kind;
    std::string field;
    std::string message;
    double value = 0.0;
    double bound = 0.0;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }
    /// True when every violation is a covariance bound (spec is otherwise well-formed).
    bool only_covariance_violations() const noexcept;
    std::string summary() const;
};

/// Never throws; reports every violated invariant.
ValidationReport validate(const PopulationSpec& spec);

/// Throws refstd::Error (InvalidSpec or OutOfBounds) when validate() reports anything.
void require_valid(const PopulationSpec& spec);

/// Exact 16-cell table P(X=x, Z1=z1, Z2=z2, Y=y).
class JointDistribution {
public:
    static constexpr std::size_t index(int x, int z1, int z2, int y) noexcept {
        return static_cast<std::size_t>((x << 3) | (z1 << 2) | (z2 << 1) | y);
    }

    double operator()(int x, int z1, int z2, int y) const noexcept { return cells_[index(x, z1, z2, y)]; }
    const std::array<double, 16>& cells() const noexcept { return cells_; }
    double total() const noexcept;

private:
    friend JointDistribution joint_distribution(const PopulationSpec& spec);
    friend JointDistribution unchecked_joint_distribution(const PopulationSpec& spec);
    std::array<double, 16> cells_{};
};

/// Requires a valid spec (throws otherwise).
JointDistribution joint_distribution(const PopulationSpec& spec);
/// Same construction without validation; cells may fall outside [0,1].
JointDistribution unchecked_joint_distribution(const PopulationSpec& spec);

enum class ConstraintContext {
    BasicJoint,  ///< all joint cells in [0,1]
    LcmHci,      ///< plus non-negative radicands for an HCI latent class model on a dependent population
    LcmHciBar,   ///< plus non-negative radicands for a dependence model on an HCI population
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double v, double tol = kProbTol) const noexcept { return v >= lo - tol && v <= hi + tol; }
};

struct CovarianceBounds {
    Interval xi;
    Interval eps;
    ConstraintContext context = ConstraintContext::BasicJoint;
};

/// Admissible ranges of xi and eps. For the LCM contexts the half-plane
/// constraint is projected on each axis with the other covariance held at 0.
/// Throws InvalidSpec if accuracies/prevalence are invalid or the projection is empty.
CovarianceBounds admissible_bounds(const PopulationSpec& spec, ConstraintContext context);

/// Right-hand side eta*(1-eta)*(1-Se_X-Sp_X)*(1-Se_Z1-Sp_Z1) of the LCM half-plane
/// constraint on eta*xi + (1-eta)*eps.
double lcm_half_plane_bound(const PopulationSpec& spec) noexcept;

/// Joint feasibility of the spec's own (xi, eps) pair in the given context.
bool is_feasible(const PopulationSpec& spec, ConstraintContext context, double tol = kProbTol);

const char* to_string(ConstraintContext context) noexcept;

}  // namespace refstd
