#pragma once

// Closed-form three-test latent class estimators. Test 1 is the index test X,
// test 2 is Z1 and test 3 is Z2; only tests 1 and 2 may be conditionally
// dependent.

#include <array>
#include <optional>

#include "refstd/methods.hpp"
#include "refstd/population.hpp"

namespace refstd {

struct MomentSet {
    double p1 = 0.0, p2 = 0.0, p3 = 0.0;
    double p12 = 0.0, p13 = 0.0, p23 = 0.0;
    double p123 = 0.0;
    double a12 = 0.0, a13 = 0.0, a23 = 0.0;

    /// Fills a_ij = p_ij - p_i p_j from the first- and second-order moments.
    static MomentSet from_probabilities(double p1, double p2, double p3, double p12, double p13, double p23,
                                        double p123) noexcept;

    /// E[(X1-p1)(X2-p2)(X3-p3)].
    double third_central_moment() const noexcept;
};

/// Moments of the population (including its xi/eps) from the closed-form expressions.
MomentSet population_moments(const PopulationSpec& spec);

enum class LcmScenario {
    MatchedHci,
    MatchedDep,
    LcmHciOnDepPopulation,  ///< HCI model, dependent population
    LcmDepOnHciPopulation,  ///< dependence model, HCI population
};

const char* to_string(LcmScenario scenario) noexcept;

struct LcmEstimate {
    std::array<double, 3> se{};
    std::array<double, 3> sp{};
    double eta_hat = 0.0;
    std::array<double, 3> raw_se{};
    std::array<double, 3> raw_sp{};
    double raw_eta = 0.0;
    /// The discarded upper root of the prevalence equation, for diagnostics only.
    double eta_upper_root = 0.0;
    /// Prevalence actually plugged into the Se/Sp expressions.
    double eta_used = 0.0;
    bool clamped = false;
    LcmScenario scenario = LcmScenario::MatchedHci;
};

/// Which prevalence the Se/Sp expressions consume. `Estimated` keeps the
/// estimator self-contained; `True` plugs in the population prevalence.
enum class EtaSource { Estimated, True };

const char* to_string(EtaSource source) noexcept;

/// Standard HCI estimator. When `plugin_eta` is set the Se/Sp expressions use
/// it instead of the estimated prevalence (eta_hat is still reported).
/// Throws UndefinedEstimator when a radicand is negative or a denominator vanishes.
LcmEstimate lcm_hci_estimate(const MomentSet& moments, std::optional<double> plugin_eta = std::nullopt);

/// Estimator for a model with cov(X1,X2|Y=1)=xi_model and cov(X1,X2|Y=0)=eps_model.
/// With xi_model == eps_model the prevalence has a closed form; otherwise the
/// prevalence equation is solved by bisection on (1e-9, 0.5-1e-9).
/// Throws UndefinedEstimator or NoRoot.
LcmEstimate lcm_dep_estimate(const MomentSet& moments, double xi_model, double eps_model,
                             std::optional<double> plugin_eta = std::nullopt);

/// Residual of the prevalence equation of the dependence model at `eta`;
/// nullopt where the expression is undefined.
std::optional<double> lcm_dep_prevalence_residual(const MomentSet& m, double xi_model, double eps_model,
                                                  double eta) noexcept;

struct LcmDeviation {
    double delta_se_x = 0.0;
    double delta_sp_x = 0.0;
    double delta_eta = 0.0;
    LcmEstimate estimate;
};

/// LcmHciOnDepPopulation: `spec` is the dependent population, model covariances are ignored.
/// LcmDepOnHciPopulation: `spec` must have xi = eps = 0; the model assumes (xi_model, eps_model).
LcmDeviation lcm_scenario_deviation(const PopulationSpec& spec, LcmScenario scenario, double xi_model,
                                    double eps_model, EtaSource eta_source = EtaSource::Estimated);

/// LCM deviations packaged as a method result for sweeps and the API.
/// For LCM_HCIBAR the spec's covariances are read as the model's assumption and
/// the population is taken to be conditionally independent.
MethodResult lcm_method(const PopulationSpec& spec, MethodId method, EtaSource eta_source = EtaSource::Estimated);

}  // namespace refstd
