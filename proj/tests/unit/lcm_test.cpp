#include <gtest/gtest.h>

#include "refstd/error.hpp"
#include "refstd/lcm.hpp"
#include "refstd/oracle.hpp"
#include "refstd/random_spec.hpp"

using namespace refstd;

namespace {

void expect_recovers(const LcmEstimate& e, const PopulationSpec& s, double tol) {
    EXPECT_NEAR(e.se[0], s.se_x, tol);
    EXPECT_NEAR(e.sp[0], s.sp_x, tol);
    EXPECT_NEAR(e.se[1], s.se_z1, tol);
    EXPECT_NEAR(e.sp[1], s.sp_z1, tol);
    EXPECT_NEAR(e.se[2], s.se_z2, tol);
    EXPECT_NEAR(e.sp[2], s.sp_z2, tol);
    EXPECT_NEAR(e.eta_hat, s.eta, tol);
}

}  // namespace

TEST(Moments, Baseline) {
    const MomentSet m = population_moments(baseline_spec());
    EXPECT_NEAR(m.p1, 0.18, 1e-15);
    EXPECT_NEAR(m.p12, 0.1 * 0.9 * 0.6 + 0.9 * 0.1 * 0.05, 1e-15);
    const MomentSet d = population_moments(baseline_spec().with_covariances(0.02, 0.0));
    EXPECT_NEAR(d.p12 - m.p12, 0.002, 1e-15);
    EXPECT_EQ(d.p13, m.p13);
    EXPECT_EQ(d.p23, m.p23);
}

TEST(Moments, MatchOracle) {
    SpecGenerator gen(17);
    for (int i = 0; i < 1000; ++i) {
        const PopulationSpec s = gen.next();
        const MomentSet a = population_moments(s);
        const MomentSet b = oracle::oracle_lcm_moments(s);
        ASSERT_NEAR(a.p12, b.p12, 1e-14);
        ASSERT_NEAR(a.p123, b.p123, 1e-14);
        ASSERT_NEAR(a.third_central_moment(), b.third_central_moment(), 1e-14);
    }
}

TEST(LcmHci, RecoversMatchedPopulation) {
    const PopulationSpec b = baseline_spec();
    const LcmEstimate e = lcm_hci_estimate(population_moments(b));
    expect_recovers(e, b, 1e-10);
    EXPECT_FALSE(e.clamped);
    EXPECT_NEAR(e.eta_upper_root, 0.9, 1e-10);
}

TEST(LcmHci, UselessTests) {
    const MomentSet m = MomentSet::from_probabilities(0.5, 0.5, 0.5, 0.25, 0.25, 0.25, 0.125);
    try {
        lcm_hci_estimate(m);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UndefinedEstimator);
    }
}

TEST(LcmHci, PositiveDeviationOnDependentPopulation) {
    const LcmDeviation d = lcm_scenario_deviation(baseline_spec().with_covariances(0.02, 0.0),
                                                  LcmScenario::LcmHciOnDepPopulation, 0, 0);
    EXPECT_GT(d.delta_se_x, 0.0);
}

TEST(LcmHci, ZeroDeviationWithoutDependence) {
    const LcmDeviation d = lcm_scenario_deviation(baseline_spec(), LcmScenario::LcmHciOnDepPopulation, 0, 0);
    EXPECT_NEAR(d.delta_se_x, 0.0, 1e-12);
    EXPECT_NEAR(d.delta_sp_x, 0.0, 1e-12);
    EXPECT_NEAR(d.delta_eta, 0.0, 1e-12);
}

TEST(LcmHci, PluginEta) {
    const PopulationSpec s = baseline_spec().with_covariances(0.02, 0.0);
    const LcmEstimate e = lcm_hci_estimate(population_moments(s), 0.1);
    EXPECT_EQ(e.eta_used, 0.1);
    EXPECT_NE(e.eta_hat, 0.1);
}

TEST(LcmDep, ZeroModelEqualsHci) {
    const MomentSet m = population_moments(baseline_spec());
    const LcmEstimate a = lcm_hci_estimate(m);
    const LcmEstimate b = lcm_dep_estimate(m, 0.0, 0.0);
    for (int i = 0; i < 3; ++i) {
        EXPECT_NEAR(a.se[i], b.se[i], 1e-12);
        EXPECT_NEAR(a.sp[i], b.sp[i], 1e-12);
    }
    EXPECT_NEAR(a.eta_hat, b.eta_hat, 1e-12);
}

TEST(LcmDep, RecoversMatchedPopulation) {
    SpecGenerator gen(23);
    int tried = 0;
    while (tried < 300) {
        PopulationSpec s;
        s.se_x = gen.uniform(0.6, 0.99);
        s.sp_x = gen.uniform(0.6, 0.99);
        s.se_z1 = gen.uniform(0.6, 0.99);
        s.sp_z1 = gen.uniform(0.6, 0.99);
        s.se_z2 = gen.uniform(0.6, 0.99);
        s.sp_z2 = gen.uniform(0.6, 0.99);
        s.eta = gen.uniform(0.05, 0.45);
        const auto box = admissible_bounds(s, ConstraintContext::BasicJoint);
        const double lo = std::max(box.xi.lo, box.eps.lo), hi = std::min(box.xi.hi, box.eps.hi);
        const double c = gen.uniform(0.5 * lo, 0.5 * hi);
        s = s.with_covariances(c, c);
        ++tried;
        const LcmEstimate e = lcm_dep_estimate(population_moments(s), c, c);
        expect_recovers(e, s, 1e-10);
    }
}

TEST(LcmDep, RecoversUnequalCovariances) {
    const PopulationSpec s = baseline_spec().with_covariances(0.02, 0.01);
    const LcmEstimate e = lcm_dep_estimate(population_moments(s), 0.02, 0.01);
    expect_recovers(e, s, 1e-9);
    const auto r = lcm_dep_prevalence_residual(population_moments(s), 0.02, 0.01, s.eta);
    ASSERT_TRUE(r.has_value());
    EXPECT_NEAR(*r, 0.0, 1e-10);
}

TEST(LcmDep, NegativeDeviationOnHciPopulation) {
    const LcmDeviation d = lcm_scenario_deviation(baseline_spec(), LcmScenario::LcmDepOnHciPopulation, 0.02, 0.02);
    EXPECT_LT(d.delta_se_x, 0.0);
}

TEST(LcmDep, ScenarioTwoNeedsHciPopulation) {
    EXPECT_THROW(lcm_scenario_deviation(baseline_spec().with_covariances(0.01, 0), LcmScenario::LcmDepOnHciPopulation,
                                        0.02, 0.0),
                 Error);
}

TEST(Scenarios, OppositeSigns) {
    for (double c : {0.005, 0.01, 0.02, 0.03}) {
        const auto one =
            lcm_scenario_deviation(baseline_spec().with_covariances(c, 0), LcmScenario::LcmHciOnDepPopulation, 0, 0);
        const auto two = lcm_scenario_deviation(baseline_spec(), LcmScenario::LcmDepOnHciPopulation, c, 0);
        EXPECT_LT(one.delta_se_x * two.delta_se_x, 0.0) << c;
    }
}

TEST(LcmMethod, Packaging) {
    const MethodResult h = lcm_method(baseline_spec().with_covariances(0.02, 0), MethodId::LCM_HCI);
    EXPECT_EQ(h.method, MethodId::LCM_HCI);
    EXPECT_TRUE(h.raw_se.has_value());
    EXPECT_NEAR(h.se - h.delta_se, 0.9, 1e-15);
    const MethodResult g = lcm_method(baseline_spec().with_covariances(0.02, 0), MethodId::LCM_HCIBAR);
    EXPECT_LT(g.delta_se, 0.0);
}

TEST(LcmMethod, ClampingPlateau) {
    // Strong eps drives the raw Se of X above one; the reported value is clamped.
    const MethodResult r =
        lcm_method(baseline_spec().with_covariances(0.0, 0.04), MethodId::LCM_HCI, EtaSource::True);
    ASSERT_TRUE(r.clamped);
    EXPECT_GT(*r.raw_se, 1.0);
    EXPECT_EQ(r.se, 1.0);
    EXPECT_NEAR(r.delta_se, 0.1, 1e-12);
}
