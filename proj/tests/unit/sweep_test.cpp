#include <gtest/gtest.h>

#include "refstd/error.hpp"
#include "refstd/export.hpp"
#include "refstd/sweep.hpp"

using namespace refstd;

namespace {

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Axis, Parse) {
    EXPECT_EQ(parse_sweep_parameter("se-z1"), SweepParameter::SeZ1);
    EXPECT_EQ(parse_sweep_parameter("SP_Z2"), SweepParameter::SpZ2);
    EXPECT_EQ(parse_sweep_parameter("eps"), SweepParameter::Eps);
    EXPECT_FALSE(parse_sweep_parameter("se_x").has_value());
    EXPECT_TRUE(is_probability_axis(SweepParameter::Eta));
    EXPECT_FALSE(is_probability_axis(SweepParameter::Xi));
}

TEST(Axis, Validation) {
    const auto code = [](SweepAxis a) {
        try {
            validate_axis(a);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::BadRequest;
    };
    EXPECT_EQ(code({SweepParameter::SeZ1, 0.3, 0.9, 1}), ErrorCode::InvalidAxis);
    EXPECT_EQ(code({SweepParameter::SeZ1, 0.9, 0.3, 10}), ErrorCode::InvalidAxis);
    EXPECT_EQ(code({SweepParameter::SeZ1, 0.3, 1.2, 10}), ErrorCode::InvalidAxis);
    EXPECT_EQ(code({SweepParameter::Xi, -0.1, std::nan(""), 10}), ErrorCode::InvalidAxis);
    EXPECT_NO_THROW(validate_axis({SweepParameter::Xi, -0.5, 0.5, 2}));
}

TEST(Axis, GridEndpoints) {
    const SweepAxis a{SweepParameter::Xi, -0.04, 0.06, 241};
    EXPECT_EQ(axis_value(a, 0), -0.04);
    EXPECT_EQ(axis_value(a, 240), 0.06);
}

TEST(Axis, Linked) {
    const SweepAxis a{SweepParameter::SeZ1, 0.3, 0.9, 3, true};
    const PopulationSpec s = apply_axis(baseline_spec(), a, 0.7);
    EXPECT_EQ(s.se_z1, 0.7);
    EXPECT_EQ(s.se_z2, 0.7);
    const PopulationSpec u = apply_axis(baseline_spec(), {SweepParameter::SpZ2, 0.3, 0.9, 3, false}, 0.7);
    EXPECT_EQ(u.sp_z2, 0.7);
    EXPECT_EQ(u.sp_z1, 0.95);
}

TEST(Sweep, ThreePointsTwoMethods) {
    const SweepResult r =
        sweep(baseline_spec(), {SweepParameter::SeZ1, 0.3, 0.9, 3}, {MethodId::IGS, MethodId::DA});
    ASSERT_EQ(r.rows.size(), 3u);
    const std::string csv = export_csv(r);
    EXPECT_EQ(count_lines(csv), 7);
    EXPECT_EQ(csv.substr(0, csv.find('\n')),
              "axis_param,axis_value,method,se,sp,delta_se,delta_sp,clamped,skipped,skip_reason");
}

TEST(Sweep, MatchesPointwiseEvaluation) {
    const SweepAxis axis{SweepParameter::Eta, 0.05, 0.3, 11};
    const SweepResult r = sweep(baseline_spec(), axis, {MethodId::CRS_O});
    for (int i = 0; i < axis.points; ++i) {
        const MethodResult direct = crs_or(apply_axis(baseline_spec(), axis, axis_value(axis, i)));
        EXPECT_EQ(*r.rows[i].cells[0].result, direct);
    }
}

TEST(Sweep, SkippedTail) {
    // Past the box bound of xi every method is skipped with OUT_OF_BOUNDS.
    const SweepResult r = sweep(baseline_spec(), {SweepParameter::Xi, 0.0, 0.08, 9}, {MethodId::IGS});
    bool seen_skip = false;
    for (const SweepRow& row : r.rows) {
        const SweepCell& c = row.cells[0];
        if (row.axis_value > 0.06 + 1e-12) {
            ASSERT_TRUE(c.skipped());
            EXPECT_EQ(c.skip_reason, "OUT_OF_BOUNDS");
            seen_skip = true;
        } else {
            EXPECT_FALSE(c.skipped()) << row.axis_value;
            EXPECT_FALSE(seen_skip);
        }
    }
    EXPECT_TRUE(seen_skip);
    const std::string csv = export_csv(r);
    EXPECT_NE(csv.find("xi,0.080000000000000002,IGS,,,,,,true,OUT_OF_BOUNDS\n"), std::string::npos);
}

TEST(Sweep, InvalidBaseThrows) {
    PopulationSpec s = baseline_spec();
    s.se_x = 0.05;
    s.sp_x = 0.5;
    EXPECT_THROW(sweep(s, {SweepParameter::Eta, 0.05, 0.3, 5}, {MethodId::IGS}), Error);
}

TEST(Sweep, ParallelMatchesSerial) {
    const SweepAxis axis{SweepParameter::Xi, -0.04, 0.06, 101};
    const std::vector<MethodId> all(std::begin(kAllMethods), std::end(kAllMethods));
    const SweepResult a = sweep(baseline_spec(), axis, all, {EtaSource::Estimated, 1});
    const SweepResult b = sweep(baseline_spec(), axis, all, {EtaSource::Estimated, 4});
    EXPECT_TRUE(a == b);
    EXPECT_EQ(export_csv(a), export_csv(b));
}

TEST(Crossovers, SelfPairIsEmpty) {
    const SweepResult r = sweep(baseline_spec(), {SweepParameter::Xi, -0.04, 0.06, 41}, {MethodId::DA, MethodId::DA});
    EXPECT_TRUE(find_crossovers(r, CrossoverQuantity::DeltaSe).empty());
}

TEST(Crossovers, RefinedResidualIsSmall) {
    const SweepResult r =
        sweep(baseline_spec(), {SweepParameter::Xi, -0.04, 0.06, 41}, {MethodId::DA, MethodId::LCM_HCI, MethodId::CRS_A});
    const auto xs = find_crossovers(r, CrossoverQuantity::AbsDeltaSe);
    ASSERT_FALSE(xs.empty());
    for (const Crossover& c : xs) {
        EXPECT_LT(std::abs(c.residual), 1e-9);
        const PopulationSpec s = baseline_spec().with_covariances(c.axis_value, 0.0);
        const double qa = quantity_of(evaluate_method(s, c.method_a, r.eta_source), c.quantity);
        const double qb = quantity_of(evaluate_method(s, c.method_b, r.eta_source), c.quantity);
        EXPECT_NEAR(qa, qb, 1e-9);
    }
}

TEST(Crossovers, ZeroCrossingOfDaSp) {
    const SweepResult r = sweep(baseline_spec(), {SweepParameter::SeZ1, 0.3, 0.9, 61}, {MethodId::DA});
    const auto z = find_zero_crossings(r, MethodId::DA, CrossoverQuantity::DeltaSp);
    ASSERT_EQ(z.size(), 1u);
    PopulationSpec s = baseline_spec();
    s.se_z1 = z[0];
    EXPECT_NEAR(discrepant_analysis(s).delta_sp, 0.0, 1e-9);
}

TEST(Crossovers, QuantityNames) {
    EXPECT_EQ(parse_crossover_quantity("abs_delta_se"), CrossoverQuantity::AbsDeltaSe);
    EXPECT_EQ(to_string(CrossoverQuantity::DeltaSp), "delta_sp");
    MethodResult m;
    m.delta_sp = -0.2;
    EXPECT_EQ(quantity_of(m, CrossoverQuantity::AbsDeltaSp), 0.2);
}
