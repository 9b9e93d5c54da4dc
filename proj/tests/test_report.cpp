// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "nlpb/report.hpp"

using namespace nlpb;
using namespace nlpb::cli;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an Error";
    return ErrorCode::RejectedSequence;
}

RunConfig parsed(const char* text) {
    RunConfig cfg = parse_config(Json::parse(text));
    validate(cfg);
    return cfg;
}

}  // namespace

TEST(Config, DefaultsAndOverrides) {
    const RunConfig cfg = parsed(R"({
        "model": {"kind": "quon", "q": 0.7, "use_N0_similarity": false},
        "dim": 20, "depth": 12, "margin": 3,
        "tolerances": {"battery": 1e-7},
        "suites": ["riesz", "battery"],
        "coherent_grid": [[0.1, 0.2], 0.3],
        "moments": {"K": 4, "R": 2.5, "nodes": 50, "n_theta": 16}
    })");
    EXPECT_EQ(cfg.model.kind, zoo::ModelKind::Quon);
    EXPECT_DOUBLE_EQ(cfg.model.q, 0.7);
    EXPECT_FALSE(cfg.model.use_n0_similarity);
    EXPECT_EQ(cfg.model.dim, 20);
    EXPECT_EQ(cfg.model.depth, 12u);
    EXPECT_EQ(cfg.model.margin, 3u);
    EXPECT_DOUBLE_EQ(cfg.tolerances.battery, 1e-7);
    EXPECT_DOUBLE_EQ(cfg.tolerances.gram, Tolerances{}.gram);
    ASSERT_EQ(cfg.suites.size(), 2u);
    EXPECT_EQ(cfg.suites[0], Suite::Riesz);
    ASSERT_EQ(cfg.coherent_grid.size(), 2u);
    EXPECT_EQ(cfg.coherent_grid[0], Complex(0.1, 0.2));
    EXPECT_EQ(cfg.coherent_grid[1], Complex(0.3, 0.0));
    EXPECT_EQ(cfg.moments.k_max, 4u);
    EXPECT_EQ(cfg.moments.support_cap, 2.5);
    EXPECT_EQ(cfg.output_path, "report.json");
}

TEST(Config, ModelAsBareString) {
    const RunConfig cfg = parsed(R"({"model": "two_by_two"})");
    EXPECT_EQ(cfg.model.kind, zoo::ModelKind::TwoByTwo);
    EXPECT_EQ(cfg.model.dim, 2);
    EXPECT_EQ(cfg.model.depth, 1u);
}

TEST(Config, Rejections) {
    for (const char* text : {
             R"({"model": {"kind": "boson"}})",
             R"({"model": {"kind": "quon", "qq": 0.5}})",
             R"({"dim": 20, "depth": 30})",
             R"({"dim": 20, "depth": 19, "margin": 2})",
             R"({"dim": 20, "depth": 4, "margin": 5})",
             R"({"tolerances": {"battery": -1}})",
             R"({"tolerances": {"batery": 1e-9}})",
             R"({"suites": []})",
             R"({"suites": ["ladders"]})",
             R"({"moments": {"R": 0}})",
             R"({"moments": {"n_theta": 0}})",
             R"({"extra": 1})",
             R"({"dim": "forty"})",
         }) {
        EXPECT_EQ(code_of([&] { parsed(text); }), ErrorCode::ConfigError) << text;
    }
}

TEST(Config, StringParameters) {
    zoo::ModelSpec spec;
    set_model_param(spec, "kind", std::string("f_deformed"));
    set_model_param(spec, "f", std::string("0,1,0.5"));
    set_model_param(spec, "dim", std::string("12"));
    EXPECT_EQ(spec.kind, zoo::ModelKind::FDeformed);
    EXPECT_EQ(spec.poly, (std::vector<double>{0.0, 1.0, 0.5}));
    EXPECT_EQ(spec.dim, 12);
    EXPECT_EQ(code_of([&] { set_model_param(spec, "q", std::string("abc")); }),
              ErrorCode::ConfigError);
}

TEST(Config, RoundTripsThroughJson) {
    const RunConfig cfg = parsed(R"({"model": {"kind": "h_deformed", "h": [1, 0.5]},
                                     "dim": 24, "depth": 16, "suites": ["battery"]})");
    const RunConfig again = parse_config(config_to_json(cfg));
    EXPECT_EQ(serialize(config_to_json(cfg)), serialize(config_to_json(again)));
}

TEST(Serialize, FloatsAndNull) {
    const Json doc{{"a", 0.1},
                   {"b", std::numeric_limits<double>::quiet_NaN()},
                   {"c", std::numeric_limits<double>::infinity()},
                   {"d", Json::array({1, 2.5, true})},
                   {"e", "x"}};
    const std::string s = serialize(doc);
    EXPECT_NE(s.find("\"a\": 1e-01"), std::string::npos) << s;
    EXPECT_NE(s.find("\"b\": null"), std::string::npos) << s;
    EXPECT_NE(s.find("\"c\": null"), std::string::npos) << s;
    EXPECT_NE(s.find("[1, 2.5e+00, true]"), std::string::npos) << s;
    // Shortest round-trip digits reproduce the double exactly.
    const Json back = Json::parse(serialize(Json{{"x", 0.1 + 0.2}}));
    EXPECT_EQ(back["x"].get<double>(), 0.1 + 0.2);
}

TEST(Execute, QuonPassesEverySuite) {
    const RunConfig cfg = parsed(R"({"model": {"kind": "quon", "q": 0.5}, "dim": 40, "depth": 30})");
    const RunOutcome out = execute(cfg);
    EXPECT_TRUE(out.all_pass);
    EXPECT_EQ(out.report["version"], std::string(kSchemaVersion));
    EXPECT_EQ(out.report["verdicts"]["overall"], "pass");
    EXPECT_EQ(out.report["verdicts"]["regular"], "regular");
    for (auto s : kSuiteOrder) EXPECT_TRUE(out.report["suites"].contains(std::string(to_string(s))));
}

TEST(Execute, FDeformedIsNotRegular) {
    const RunConfig cfg = parsed(R"({"model": {"kind": "f_deformed", "f": [0, 1]},
                                     "dim": 30, "depth": 20,
                                     "suites": ["battery", "riesz"]})");
    const RunOutcome out = execute(cfg);
    EXPECT_FALSE(out.all_pass);
    EXPECT_EQ(out.report["verdicts"]["battery"], "pass");
    EXPECT_EQ(out.report["verdicts"]["riesz"], "fail");
    EXPECT_EQ(out.report["verdicts"]["regular"], "non-regular-indicated");
}

TEST(Execute, ToleranceOverrideFlipsAVerdict) {
    RunConfig cfg = parsed(R"({"model": {"kind": "quon", "q": 0.5}, "dim": 40, "depth": 30,
                               "suites": ["battery"]})");
    EXPECT_TRUE(execute(cfg).all_pass);
    set_tolerance(cfg.tolerances, "battery", 1e-300);
    set_tolerance(cfg.tolerances, "gram", 1e-300);
    EXPECT_FALSE(execute(cfg).all_pass);
    EXPECT_EQ(code_of([&] { set_tolerance(cfg.tolerances, "gram", std::nan("")); }),
              ErrorCode::ConfigError);
}

TEST(Execute, ConstructionErrorsBecomeFailedChecks) {
    RunConfig cfg = parsed(R"({"model": {"kind": "quon", "q": 0.5}, "dim": 40, "depth": 30,
                               "suites": ["coherent"], "coherent_grid": [[1.5, 0]]})");
    const RunOutcome out = execute(cfg);
    EXPECT_FALSE(out.all_pass);
    const std::string s = serialize(out.report);
    EXPECT_NE(s.find("OutsideRadius"), std::string::npos);
}

TEST(Execute, Deterministic) {
    const RunConfig cfg = parsed(R"({"model": {"kind": "similarity_diagonal", "eps": "quon"},
                                     "dim": 30, "depth": 20})");
    EXPECT_EQ(serialize(execute(cfg).report), serialize(execute(cfg).report));
}

TEST(Summary, OneLinePerCheck) {
    const RunConfig cfg = parsed(R"({"model": "two_by_two", "suites": ["battery"]})");
    const RunOutcome out = execute(cfg);
    std::ostringstream table;
    print_summary(out.report, table);
    const std::string text = table.str();
    EXPECT_NE(text.find("vacuum-phi"), std::string::npos);
    EXPECT_NE(text.find("metric-duality"), std::string::npos);
}
