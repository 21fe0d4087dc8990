#include <gtest/gtest.h>

#include "refstd/error.hpp"
#include "refstd/export.hpp"
#include "refstd/json_io.hpp"

using namespace refstd;

namespace {

SweepResult sample() {
    const std::vector<MethodId> all(std::begin(kAllMethods), std::end(kAllMethods));
    // Runs past the xi bound so the export carries skipped cells too.
    return sweep(baseline_spec(), {SweepParameter::Xi, -0.04, 0.07, 23}, all);
}

}  // namespace

TEST(Json, DoubleFormat) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(dump_json(Json{{"a", 0.5}, {"b", 1}}), "{\"a\":0.5,\"b\":1}");
    EXPECT_EQ(dump_json(Json{{"a", std::nan("")}}), "{\"a\":null}");
}

TEST(Json, SpecRoundTrip) {
    const PopulationSpec s = baseline_spec().with_covariances(0.0123456789, -0.001);
    EXPECT_EQ(spec_from_json(parse_json(dump_json(to_json(s)))), s);
}

TEST(Json, StrictSpec) {
    Json j = to_json(baseline_spec());
    j["extra"] = 1;
    try {
        spec_from_json(j);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BadRequest);
        EXPECT_EQ(e.detail(), "spec.extra");
    }
    Json k = to_json(baseline_spec());
    k.erase("eta");
    EXPECT_THROW(spec_from_json(k), Error);
    Json t = to_json(baseline_spec());
    t["xi"] = "0.1";
    EXPECT_THROW(spec_from_json(t), Error);
    EXPECT_THROW(parse_json("{not json"), Error);
}

TEST(Export, JsonRoundTripIsExact) {
    const SweepResult r = sample();
    const std::string text = export_json(r);
    const SweepResult back = import_json(text);
    EXPECT_TRUE(back == r);
    EXPECT_EQ(export_json(back), text);
}

TEST(Export, CsvRoundTrip) {
    const SweepResult r = sample();
    const std::string csv = export_csv(r);
    const SweepResult back = import_csv(csv);
    EXPECT_EQ(back.axis, r.axis);
    EXPECT_EQ(back.methods, r.methods);
    EXPECT_EQ(export_csv(back), csv);
    EXPECT_EQ(export_csv(import_json(export_json(back))), csv);
}

TEST(Export, SkippedCellsInJson) {
    const Json j = sweep_to_json(sample());
    const Json& last = j["rows"].back()["results"][0];
    EXPECT_EQ(last["skipped"], true);
    EXPECT_EQ(last["skip_reason"], "OUT_OF_BOUNDS");
}

TEST(Export, ImportErrors) {
    EXPECT_THROW(import_csv("bad,header\n"), Error);
    EXPECT_THROW(import_json("{\"axis\":{}}"), Error);
    EXPECT_EQ(parse_export_format("csv"), ExportFormat::Csv);
    EXPECT_FALSE(parse_export_format("xml").has_value());
}
