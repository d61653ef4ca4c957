#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "ellipfuse/config.hpp"

using namespace ellipfuse;
using nlohmann::json;

namespace {

json minimal_scenario() {
    return json::parse(R"({
      "target": [10.0, -12.0],
      "agents": [
        {"initial_estimate": {"center": [2, -1], "shape": [[36, 0], [0, 36]]},
         "sensor": {"pose": [-15, 0], "r_min": 2, "r_max": 70, "sigma_deg": 12}}
      ],
      "steps": 5,
      "methods": ["cce"],
      "seed": 1
    })");
}

std::string error_path(const json& j) {
    try {
        scenario_from_json(j, "");
        return "<no error>";
    } catch (const ConfigError& e) {
        return e.path();
    }
}

} // namespace

TEST_CASE("minimal scenario parses and echoes its inputs") {
    const ScenarioConfig c = scenario_from_json(minimal_scenario(), "");
    CHECK(c.target.x == 10.0);
    CHECK(c.target.y == -12.0);
    REQUIRE(c.agents.size() == 1);
    CHECK(c.agents[0].initial_estimate.shape.xx() == 36.0);
    CHECK(c.agents[0].sensor.r_max == 70.0);
    CHECK(c.steps == 5);
    CHECK(c.methods.size() == 1);
    CHECK(c.methods[0].name() == "cce");
    CHECK(c.network.comm_period == 1);
    CHECK(c.seed == 1);
}

TEST_CASE("validation errors carry JSON-pointer-style paths") {
    SUBCASE("inverted range band names the sensor") {
        json j = minimal_scenario();
        j["agents"][0]["sensor"]["r_min"] = 80.0;
        CHECK(error_path(j) == "/agents/0/sensor");
    }
    SUBCASE("sigma_deg = 0 is rejected") {
        json j = minimal_scenario();
        j["agents"][0]["sensor"]["sigma_deg"] = 0.0;
        CHECK(error_path(j) == "/agents/0/sensor");
    }
    SUBCASE("unknown fields are rejected with their own path") {
        json j = minimal_scenario();
        j["agents"][0]["sensor"]["bias"] = 1.0;
        CHECK(error_path(j) == "/agents/0/sensor/bias");
        json k = minimal_scenario();
        k["extra"] = true;
        CHECK(error_path(k) == "/extra");
    }
    SUBCASE("non-SPD initial shape names the shape") {
        json j = minimal_scenario();
        j["agents"][0]["initial_estimate"]["shape"] = {{1.0, 2.0}, {2.0, 1.0}};
        CHECK(error_path(j) == "/agents/0/initial_estimate/shape");
    }
    SUBCASE("asymmetric shape is rejected") {
        json j = minimal_scenario();
        j["agents"][0]["initial_estimate"]["shape"] = {{36.0, 0.5}, {0.0, 36.0}};
        CHECK(error_path(j) == "/agents/0/initial_estimate/shape");
    }
    SUBCASE("steps must be positive") {
        json j = minimal_scenario();
        j["steps"] = 0;
        CHECK(error_path(j) == "/steps");
    }
    SUBCASE("unknown method name") {
        json j = minimal_scenario();
        j["methods"] = {"bogus"};
        CHECK(error_path(j) == "/methods/0");
    }
    SUBCASE("duplicate methods") {
        json j = minimal_scenario();
        j["methods"] = {"cce", "cce"};
        CHECK(error_path(j) == "/methods/1");
    }
    SUBCASE("drop probability domain") {
        json j = minimal_scenario();
        j["network"] = {{"drop_prob", 1.0}};
        CHECK(error_path(j) == "/network/drop_prob");
    }
    SUBCASE("explicit topology validates edge ids") {
        json j = minimal_scenario();
        j["network"] = {{"topology", "explicit"}, {"edges", {{1, 2}}}};
        CHECK(error_path(j) == "/network/edges/0");
    }
    SUBCASE("missing required field") {
        json j = minimal_scenario();
        j.erase("seed");
        CHECK(error_path(j) == "/seed");
    }
}

TEST_CASE("scenario round-trip is semantically identical") {
    json j = minimal_scenario();
    j["methods"] = {"noncollab", "kalman", "ci", "ici", "cce"};
    j["alpha_criterion"] = "trace";
    j["network"] = {{"comm_period", 2}, {"drop_prob", 0.125}, {"topology", "complete"}};
    const ScenarioConfig a = scenario_from_json(j, "");
    const ScenarioConfig b = scenario_from_json(to_json(a), "");
    CHECK(to_json(a) == to_json(b));
    CHECK(b.methods.size() == 5);
    CHECK(b.alpha_criterion == AlphaCriterion::min_trace);
    CHECK(b.network.drop_prob == 0.125);
}

TEST_CASE("monte carlo config parses with defaults and round-trips") {
    json j{{"base", minimal_scenario()}, {"runs", 10}};
    const MonteCarloConfig c = montecarlo_from_json(j);
    CHECK(c.runs == 10);
    CHECK(c.randomization.gamma_mean == 10.0);
    CHECK(c.randomization.r_max_std == 20.0);
    CHECK(c.histogram_bins == 30);
    const MonteCarloConfig again = montecarlo_from_json(to_json(c));
    CHECK(to_json(c) == to_json(again));

    json bad = j;
    bad["runs"] = 0;
    CHECK_THROWS_AS(montecarlo_from_json(bad), ConfigError);
}

TEST_CASE("load_config distinguishes the two kinds and reports I/O errors") {
    const std::string scenario_path = "test_config_scenario.json";
    {
        std::ofstream out(scenario_path);
        out << minimal_scenario().dump();
    }
    CHECK(std::holds_alternative<ScenarioConfig>(load_config(scenario_path)));

    const std::string mc_path = "test_config_mc.json";
    {
        std::ofstream out(mc_path);
        out << json{{"base", minimal_scenario()}, {"runs", 3}}.dump();
    }
    CHECK(std::holds_alternative<MonteCarloConfig>(load_config(mc_path)));

    CHECK_THROWS_AS(load_config("does_not_exist.json"), IoError);

    const std::string garbled_path = "test_config_garbled.json";
    {
        std::ofstream out(garbled_path);
        out << "{ not json";
    }
    CHECK_THROWS_AS(load_config(garbled_path), ConfigError);

    std::remove(scenario_path.c_str());
    std::remove(mc_path.c_str());
    std::remove(garbled_path.c_str());
}

TEST_CASE("ellipsoid pair files parse") {
    const std::string path = "test_config_pair.json";
    {
        std::ofstream out(path);
        out << R"({"ei": {"center": [0,0], "shape": [[1,0],[0,1]]},
                   "ej": {"center": [1,0], "shape": [[1,0],[0,1]]}})";
    }
    const auto [ei, ej] = load_ellipsoid_pair(path);
    CHECK(ei.center.x == 0.0);
    CHECK(ej.center.x == 1.0);
    std::remove(path.c_str());
}
