#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "cowi/envgen.hpp"
#include "cowi/io.hpp"

using namespace cowi;

namespace {

std::string data(const std::string& name) { return std::string(COWI_TEST_DATA) + "/" + name; }

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("cowi_test_" + name)).string();
}

} // namespace

TEST(InstanceIo, RoundTrip) {
    TransitiveParams p;
    p.indiff_fraction = 0.4;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto inst = gen_transitive(7, p, seed);
        const auto path = temp_path("roundtrip.json");
        save_instance(inst, path);
        EXPECT_EQ(load_instance(path), inst);
        std::remove(path.c_str());
    }
}

TEST(InstanceIo, LoadsCounterexample) {
    const auto inst = load_instance(data("counterexample.json"));
    EXPECT_EQ(inst, PreferenceInstance::uniform(3, {0.5, 0.25, 0.25}));
}

TEST(InstanceIo, MissingPairIsFatal) {
    try {
        load_instance(data("missing_pair.json"));
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("missing pair (2,3)"), std::string::npos);
    }
}

TEST(InstanceIo, SimplexViolationIsFatal) {
    EXPECT_THROW(load_instance(data("simplex_violation.json")), ValidationError);
}

TEST(InstanceIo, ToleranceBoundaryAccepted) {
    ValidationReport rep;
    EXPECT_NO_THROW(load_instance(data("near_simplex.json"), &rep));
    EXPECT_TRUE(rep.ok());
}

TEST(InstanceIo, ModeTieIsWarning) {
    ValidationReport rep;
    load_instance(data("mode_tie.json"), &rep);
    EXPECT_EQ(rep.warning_count(), 1u);
}

TEST(InstanceIo, MalformedJson) {
    EXPECT_THROW(parse_instance_json(json::parse(R"({"n": 2})")), FileError);
    EXPECT_THROW(read_instance_file("/nonexistent/file.json"), FileError);
}

TEST(TraceIo, RoundTrip) {
    RunTrace t;
    t.duels = {{1, 0, 2, 30, Outcome::win}, {2, 2, 1, 45, Outcome::indifferent}};
    t.rounds = 2;
    t.total_samples = 75;
    t.returned_arm = 0;
    const auto j = trace_to_json(t);
    EXPECT_EQ(j["duels"][0]["i"], 1);
    EXPECT_EQ(j["duels"][0]["j"], 3);
    EXPECT_EQ(j["returned_arm"], 1);
    EXPECT_EQ(trace_from_json(j), t);
}

TEST(BoundReportIo, Serializes) {
    const auto r = bound_report(PreferenceInstance::uniform(3, {0.5, 0.25, 0.25}), 0.05);
    const auto j = bound_report_to_json(r);
    EXPECT_TRUE(j["lower_detailed"]["applicable"]);
    EXPECT_NEAR(j["lower_detailed"]["value"].get<double>(), 18.35, 0.01);
    EXPECT_EQ(j["lower_detailed"]["per_arm"].size(), 2u);
    EXPECT_EQ(j["lower_simple"]["value"].get<double>(), 0.0);
    EXPECT_TRUE(j["lower_simple"].contains("reason"));
}
