#include <gtest/gtest.h>

#include "gtr/json_io.hpp"
#include "gtr/scenario.hpp"
#include "gtr/suites.hpp"

using namespace gtr;
using json_io::json;

namespace {

std::string scenario(const std::string& op, const json& ring, const json& inputs, const json& config = json::object()) {
    json j{{"schema", json_io::kScenarioSchema}, {"operation", op}, {"ring", ring}, {"inputs", inputs}};
    if (!config.empty()) j["config"] = config;
    return j.dump();
}

json mat(const std::vector<std::vector<std::string>>& rows) {
    json out = json::array();
    for (auto& r : rows) out.push_back(json(r));
    return out;
}

}  // namespace

TEST(Json, RoundTripsRingElementsAndMatrices) {
    Ring R = ring_zh();
    RMat m = RMat::from_rows(R, {{parse_elem(R, "1/2 + 3*z"), parse_elem(R, "-h")}, {parse_elem(R, "0"), parse_elem(R, "z - h/3")}});
    EXPECT_EQ(json_io::rmat_from_json(R, json_io::to_json(m), "m"), m);
    auto M = seeded_connection(R, {0, 1}, 2, 3);
    EXPECT_EQ(json_io::connection_from_json(R, json_io::to_json(M)["A"], 3), M);
    Ring S = json_io::ring_from_json(json_io::to_json(R));
    EXPECT_EQ(S->dim(), R->dim());
    EXPECT_EQ(S->describe(), R->describe());
}

TEST(Json, WitnessEmbedding) {
    EXPECT_TRUE(json_io::witness_json("[[\"1\"]]").is_array());
    EXPECT_TRUE(json_io::witness_json("dim 2").is_string());
    EXPECT_TRUE(json_io::witness_json("").is_null());
}

TEST(Scenario, HenselOnDualNumbers) {
    auto s = parse_scenario(scenario("hensel_factor", "dual", {{"P", {"e", "-1-e", "1"}}, {"Q0", {"0", "1"}}, {"S0", {"-1", "1"}}}));
    auto r = compute(s);
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.output["result"]["Q"], (json{"-e", "1"}));
    EXPECT_EQ(r.output["result"]["S"], (json{"-1", "1"}));
    EXPECT_TRUE(r.output["result"]["product_matches"].get<bool>());
}

TEST(Scenario, FiberTypeOfZeroMatrix) {
    auto r = compute(parse_scenario(scenario("fiber_type", "Q", {{"nu", mat({{"0", "0"}, {"0", "0"}})}})));
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.output["result"]["kind"], "FullFlag");
    EXPECT_TRUE(r.output["result"]["fiber_ring"].is_null());
}

TEST(Scenario, ParseErrors) {
    EXPECT_THROW(parse_scenario("{\"schema\": "), ParseError);
    EXPECT_THROW(parse_scenario(json{{"operation", "fiber_type"}}.dump()), ParseError);
    EXPECT_THROW(parse_scenario(json{{"schema", "gtr-scenario/0"}, {"operation", "fiber_type"}}.dump()), ParseError);
    EXPECT_THROW(parse_scenario(scenario("no_such_op", "Q", json::object())), ParseError);
    EXPECT_THROW(parse_scenario(scenario("fiber_type", "Q", json::object(), {{"truncation", 1000}})), ParseError);
    EXPECT_THROW(parse_scenario(scenario("fiber_type", "Q", json::object(), {{"colour", 1}})), ParseError);
    // inputs are checked when the operation runs
    EXPECT_THROW(compute(parse_scenario(scenario("fiber_type", "Q", json::object()))), ParseError);
    EXPECT_THROW(compute(parse_scenario(scenario("fiber_type", "Q", {{"nu", mat({{"0", "x"}, {"0", "0"}})}}))), ParseError);
    EXPECT_THROW(compute(parse_scenario(scenario("fiber_type", "nonsense", {{"nu", {{"0"}}}}))), ParseError);
}

TEST(Scenario, OperationErrorsExitOne) {
    // weight 1/2 is not integral
    auto r = compute(parse_scenario(scenario("d_pdr", "Q", {{"A", json::array({mat({{"1/2"}})})}})));
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_TRUE(r.output.contains("error"));
}

TEST(Scenario, Deterministic) {
    const std::string text = scenario("seeded_connection", "zh", {{"weights", {0, 2}}}, {{"seed", 3}, {"truncation", 4}});
    EXPECT_EQ(compute(parse_scenario(text)).output.dump(), compute(parse_scenario(text)).output.dump());
    auto t = compute(parse_scenario(scenario("translate", "Q", {{"A", json::array({mat({{"0", "0"}, {"0", "1"}})})}, {"lambda", {0, 0}}, {"mu", {0, 1}}},
                                             {{"truncation", 4}})));
    EXPECT_EQ(t.output["result"]["weights"], (json{1, 1}));
}

TEST(Suites, UnknownSuite) { EXPECT_THROW(run_suite("unknown"), UnknownSuite); }

TEST(Suites, ParallelMatchesSerial) {
    SuiteOptions serial, par;
    par.jobs = 3;
    auto a = run_suite("weights", serial), b = run_suite("weights", par);
    EXPECT_TRUE(a.ok());
    ASSERT_EQ(a.report.checks.size(), b.report.checks.size());
    for (std::size_t i = 0; i < a.report.checks.size(); ++i) {
        EXPECT_EQ(a.report.checks[i].name, b.report.checks[i].name);
        EXPECT_EQ(a.report.checks[i].pass, b.report.checks[i].pass);
        EXPECT_EQ(a.report.checks[i].witness, b.report.checks[i].witness);
    }
}

TEST(Suites, OtherSeedsPass) {
    SuiteOptions o;
    o.seed = 7;
    EXPECT_TRUE(run_suite("springer", o).ok());
    EXPECT_TRUE(run_suite("structure", o).ok());
}
