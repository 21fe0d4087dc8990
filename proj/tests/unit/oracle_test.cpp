#include <gtest/gtest.h>

#include "refstd/methods.hpp"
#include "refstd/oracle.hpp"
#include "refstd/random_spec.hpp"

using namespace refstd;

TEST(Oracle, TableSumsToOne) {
    const auto t = oracle::outcome_table(baseline_spec().with_covariances(0.02, 0.01));
    double total = 0.0, obs = 0.0;
    for (const auto& r : t.rows) total += r.probability;
    for (double p : t.observable) obs += p;
    EXPECT_NEAR(total, 1.0, 1e-15);
    EXPECT_NEAR(obs, 1.0, 1e-15);
}

TEST(Oracle, ReferenceRules) {
    for (int x = 0; x < 2; ++x)
        for (int z1 = 0; z1 < 2; ++z1)
            for (int z2 = 0; z2 < 2; ++z2) {
                EXPECT_EQ(oracle::reference_value(MethodId::IGS, x, z1, z2), z1);
                EXPECT_EQ(oracle::reference_value(MethodId::CRS_A, x, z1, z2), z1 & z2);
                EXPECT_EQ(oracle::reference_value(MethodId::CRS_O, x, z1, z2), z1 | z2);
                EXPECT_EQ(oracle::reference_value(MethodId::DA, x, z1, z2), x == z1 ? x : z2);
            }
}

TEST(Oracle, BaselineIgsAndDa) {
    const auto igs_r = oracle::oracle_method_accuracy(baseline_spec(), MethodId::IGS);
    EXPECT_NEAR(igs_r.se, 0.557142857142857, 1e-12);
    const auto da = oracle::oracle_method_accuracy(baseline_spec(), MethodId::DA);
    EXPECT_NEAR(da.se, 0.9375, 1e-12);
    EXPECT_NEAR(da.delta_se, 0.0375, 1e-12);
}

TEST(Oracle, Moments) {
    const MomentSet m = oracle::oracle_lcm_moments(baseline_spec());
    EXPECT_NEAR(m.p1, 0.18, 1e-15);
    EXPECT_NEAR(m.p3, 0.105, 1e-15);

    const MomentSet d = oracle::oracle_lcm_moments(baseline_spec().with_covariances(0.02, 0.0));
    EXPECT_NEAR(d.p12 - m.p12, 0.002, 1e-15);
    EXPECT_NEAR(d.p13, m.p13, 1e-15);
    EXPECT_NEAR(d.p23, m.p23, 1e-15);
}

TEST(Oracle, CovarianceRecovered) {
    const auto [c1, c0] = oracle::oracle_tilde_covariance(baseline_spec().with_covariances(0.02, 0.01), MethodId::IGS);
    EXPECT_NEAR(c1, 0.02, 1e-15);
    EXPECT_NEAR(c0, 0.01, 1e-15);
}

TEST(Oracle, DaTildeCovariance) {
    const auto [c1, c0] = oracle::oracle_tilde_covariance(baseline_spec().with_covariances(0.02, 0.0), MethodId::DA);
    EXPECT_NEAR(c1, 0.0548, 1e-12);
    (void)c0;
}

TEST(Oracle, CrsOTildeCovariance) {
    const PopulationSpec s = baseline_spec().with_covariances(0.03, 0.0);
    EXPECT_NEAR(oracle::oracle_tilde_covariance(s, MethodId::CRS_O).first, 0.03 * (1 - s.se_z2), 1e-15);
}

TEST(Oracle, A13A23IgnoreDependence) {
    SpecGenerator gen(11);
    for (int i = 0; i < 200; ++i) {
        const PopulationSpec s = gen.next();
        const MomentSet dep = oracle::oracle_lcm_moments(s);
        const MomentSet hci = oracle::oracle_lcm_moments(s.with_covariances(0.0, 0.0));
        ASSERT_NEAR(dep.a13, hci.a13, 1e-15);
        ASSERT_NEAR(dep.a23, hci.a23, 1e-15);
    }
}

TEST(Oracle, CrsAAgainstIgs) {
    // An uninformative Z2 cancels out of Se under the AND rule; an informative one does not.
    PopulationSpec s = baseline_spec();
    s.se_z2 = 0.3;
    s.sp_z2 = 0.7;
    const auto a = oracle::oracle_method_accuracy(s, MethodId::CRS_A);
    const auto b = oracle::oracle_method_accuracy(s, MethodId::IGS);
    EXPECT_NEAR(a.se, b.se, 1e-12);
    EXPECT_GT(std::abs(a.sp - b.sp), 1e-3);
    const auto c = oracle::oracle_method_accuracy(baseline_spec(), MethodId::CRS_A);
    const auto d = oracle::oracle_method_accuracy(baseline_spec(), MethodId::IGS);
    EXPECT_GT(std::abs(c.se - d.se), 1e-3);
}
