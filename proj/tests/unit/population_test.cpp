#include <gtest/gtest.h>

#include "refstd/error.hpp"
#include "refstd/population.hpp"
#include "refstd/random_spec.hpp"

using namespace refstd;

TEST(Population, BaselineIsValid) {
    EXPECT_TRUE(validate(baseline_spec()).ok());
    EXPECT_NO_THROW(require_valid(baseline_spec()));
}

TEST(Population, UninformativeIndexTest) {
    PopulationSpec s = baseline_spec();
    s.se_x = 0.4;
    s.sp_x = 0.5;
    const auto r = validate(s);
    ASSERT_EQ(r.violations.size(), 1u);
    EXPECT_EQ(r.violations[0].kind, ViolationKind::Youden);
    EXPECT_EQ(r.violations[0].message, "J_X <= 0");
    try {
        require_valid(s);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidSpec);
    }
}

TEST(Population, XiAboveBound) {
    const auto r = validate(baseline_spec().with_covariances(0.07, 0.0));
    ASSERT_EQ(r.violations.size(), 1u);
    EXPECT_EQ(r.violations[0].message, "xi above upper bound 0.06");
    EXPECT_NEAR(r.violations[0].bound, 0.06, 1e-15);
    try {
        require_valid(baseline_spec().with_covariances(0.07, 0.0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::OutOfBounds);
        EXPECT_EQ(e.detail(), "xi");
    }
}

TEST(Population, RangeViolations) {
    PopulationSpec s = baseline_spec();
    s.eta = 0.0;
    EXPECT_FALSE(validate(s).ok());
    s.eta = 1.0;
    EXPECT_FALSE(validate(s).ok());
    s = baseline_spec();
    s.sp_z2 = 1.2;
    EXPECT_EQ(validate(s).violations.at(0).field, "sp_z2");
    s = baseline_spec();
    s.xi = std::nan("");
    EXPECT_FALSE(validate(s).ok());
}

TEST(Population, BoundaryTolerance) {
    const PopulationSpec b = baseline_spec();
    EXPECT_TRUE(validate(b.with_covariances(0.06 + 1e-13, 0.0)).ok());
    EXPECT_FALSE(validate(b.with_covariances(0.06 + 1e-9, 0.0)).ok());
    EXPECT_TRUE(validate(b.with_covariances(-0.04, -0.005)).ok());
}

TEST(Youden, Examples) {
    EXPECT_EQ(youden(1, 1).value, 1.0);
    EXPECT_EQ(youden(0, 0).value, -1.0);
    EXPECT_NEAR(youden(0.9, 0.9).value, 0.8, 1e-15);
}

TEST(Youden, MonotoneAndAntisymmetric) {
    SpecGenerator gen(3);
    for (int i = 0; i < 1000; ++i) {
        const double se = gen.unit(), sp = gen.unit(), d = 0.01 * gen.unit();
        EXPECT_GE(youden(se + d, sp).value, youden(se, sp).value);
        EXPECT_GE(youden(se, sp + d).value, youden(se, sp).value);
        EXPECT_NEAR(youden(1 - se, 1 - sp).value, -youden(se, sp).value, 1e-15);
    }
}

TEST(Joint, BaselineCell) {
    const JointDistribution jd = joint_distribution(baseline_spec());
    EXPECT_NEAR(jd(1, 1, 1, 1), 0.0324, 1e-15);
    EXPECT_NEAR(jd.total(), 1.0, 1e-15);
}

TEST(Joint, DependentCell) {
    const PopulationSpec s = baseline_spec().with_covariances(0.02, 0.01);
    const JointDistribution jd = joint_distribution(s);
    EXPECT_NEAR(jd(1, 1, 1, 1), 0.1 * (0.9 * 0.6 + 0.02) * 0.6, 1e-15);
    EXPECT_NEAR(jd(1, 0, 0, 0), 0.9 * (0.1 * 0.95 - 0.01) * 0.95, 1e-15);
}

TEST(Joint, ValidSpecsGiveProbabilities) {
    SpecGenerator gen(5);
    for (int i = 0; i < 2000; ++i) {
        const PopulationSpec s = gen.next();
        const JointDistribution jd = joint_distribution(s);
        ASSERT_NEAR(jd.total(), 1.0, 1e-12);
        for (double c : jd.cells()) {
            ASSERT_GE(c, -1e-12);
            ASSERT_LE(c, 1.0 + 1e-12);
        }
        // Marginals are preserved by the covariance terms.
        double se_x = 0, se_z1 = 0, pos = 0;
        for (int x = 0; x < 2; ++x)
            for (int z1 = 0; z1 < 2; ++z1)
                for (int z2 = 0; z2 < 2; ++z2) {
                    pos += jd(x, z1, z2, 1);
                    se_x += x * jd(x, z1, z2, 1);
                    se_z1 += z1 * jd(x, z1, z2, 1);
                }
        ASSERT_NEAR(pos, s.eta, 1e-12);
        ASSERT_NEAR(se_x / pos, s.se_x, 1e-9);
        ASSERT_NEAR(se_z1 / pos, s.se_z1, 1e-9);
    }
}

TEST(Joint, HciFactorizes) {
    SpecGenerator gen(6);
    for (int i = 0; i < 500; ++i) {
        const PopulationSpec s = gen.next_hci();
        const JointDistribution jd = joint_distribution(s);
        const double v = s.eta * s.se_x * (1 - s.se_z1) * s.se_z2;
        ASSERT_NEAR(jd(1, 0, 1, 1), v, 1e-15);
    }
}

TEST(Joint, InvalidSpecThrows) {
    PopulationSpec s = baseline_spec();
    s.eta = 0;
    EXPECT_THROW(joint_distribution(s), Error);
    EXPECT_NO_THROW(unchecked_joint_distribution(s));
}

TEST(Bounds, Baseline) {
    const CovarianceBounds b = admissible_bounds(baseline_spec(), ConstraintContext::BasicJoint);
    EXPECT_NEAR(b.xi.lo, -0.04, 1e-15);
    EXPECT_NEAR(b.xi.hi, 0.06, 1e-15);
    EXPECT_NEAR(b.eps.lo, -0.005, 1e-15);
    EXPECT_NEAR(b.eps.hi, 0.045, 1e-15);
}

TEST(Bounds, LcmHalfPlane) {
    EXPECT_NEAR(lcm_half_plane_bound(baseline_spec()), 0.0396, 1e-15);
    const CovarianceBounds hci = admissible_bounds(baseline_spec(), ConstraintContext::LcmHci);
    EXPECT_NEAR(hci.xi.lo, -0.04, 1e-15);
    EXPECT_NEAR(hci.xi.hi, 0.06, 1e-15);
    const CovarianceBounds bar = admissible_bounds(baseline_spec(), ConstraintContext::LcmHciBar);
    EXPECT_LE(bar.xi.hi, 0.06);
    EXPECT_LE(bar.eps.hi, 0.045);
    EXPECT_EQ(bar.context, ConstraintContext::LcmHciBar);
}

TEST(Bounds, PerfectIndexTest) {
    PopulationSpec s = baseline_spec();
    s.se_x = 1.0;
    s.sp_x = 1.0;
    const CovarianceBounds b = admissible_bounds(s, ConstraintContext::BasicJoint);
    EXPECT_NEAR(b.xi.lo, 0.0, 1e-15);
    EXPECT_NEAR(b.xi.hi, 0.0, 1e-15);
}

TEST(Bounds, Feasibility) {
    EXPECT_TRUE(is_feasible(baseline_spec().with_covariances(0.05, 0.04), ConstraintContext::BasicJoint));
    EXPECT_FALSE(is_feasible(baseline_spec().with_covariances(0.061, 0.0), ConstraintContext::BasicJoint));
    const PopulationSpec corner = baseline_spec().with_covariances(0.06, 0.045);
    EXPECT_TRUE(is_feasible(corner, ConstraintContext::BasicJoint));
    EXPECT_TRUE(is_feasible(corner, ConstraintContext::LcmHci));
    EXPECT_FALSE(is_feasible(corner, ConstraintContext::LcmHciBar));
    EXPECT_STREQ(to_string(ConstraintContext::LcmHci), "lcm_hci");
}
