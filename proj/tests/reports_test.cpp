#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include "switchlab/json_report.hpp"

using namespace switchlab;

namespace {

nlohmann::json load_schema(const std::string& name) {
    const std::string path = std::string(SWITCHLAB_SOURCE_DIR) + "/docs/schemas/" + name;
    std::ifstream in(path);
    REQUIRE(in.good());
    return nlohmann::json::parse(in);
}

// Minimal structural validation: type, required, properties, array items.
bool conforms(const nlohmann::json& value, const nlohmann::json& schema) {
    if (schema.contains("type")) {
        const std::string type = schema["type"];
        if (type == "object" && !value.is_object()) return false;
        if (type == "array" && !value.is_array()) return false;
        if (type == "string" && !value.is_string()) return false;
        if (type == "boolean" && !value.is_boolean()) return false;
        if (type == "integer" && !value.is_number_integer()) return false;
        if (type == "number" && !value.is_number()) return false;
    }
    if (schema.contains("required")) {
        for (const auto& key : schema["required"]) {
            if (!value.contains(key.get<std::string>())) return false;
        }
    }
    if (schema.contains("properties") && value.is_object()) {
        for (const auto& [key, sub] : schema["properties"].items()) {
            if (value.contains(key) && !conforms(value[key], sub)) return false;
        }
    }
    if (schema.contains("items") && value.is_array()) {
        for (const auto& item : value) {
            if (!conforms(item, schema["items"])) return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("round9 pins nine decimal digits and normalizes negative zero") {
    REQUIRE(round9(0.1234567894) == Catch::Approx(0.123456789).margin(1e-15));
    REQUIRE(round9(0.1234567896) == Catch::Approx(0.123456790).margin(1e-15));
    REQUIRE(round9(-1e-12) == 0.0);
    REQUIRE(!std::signbit(round9(-1e-12)));
}

TEST_CASE("table serialization matches the documented format") {
    ProbTable t({{"u", 2}, {"v", 3}});
    for (std::size_t f = 0; f < t.size(); ++f) t[f] = static_cast<double>(f) / 15.0;
    const nlohmann::json j = to_json(t);
    REQUIRE(conforms(j, load_schema("table.schema.json")));
    REQUIRE(j["vars"].size() == 2);
    REQUIRE(j["vars"][0]["name"] == "u");
    REQUIRE(j["vars"][1]["card"] == 3);
    REQUIRE(j["values"].size() == 6);

    const PossTable p = possibilize(t, 0.1);
    const nlohmann::json jp = to_json(p);
    REQUIRE(conforms(jp, load_schema("table.schema.json")));
    REQUIRE(jp["values"][0] == 0);
    REQUIRE(jp["values"][5] == 1);
}

TEST_CASE("mermin report serialization validates against its schema") {
    const MerminReport rep = eval_causal_mermin(build_ghz_three_switch({}));
    const nlohmann::json j = to_json(rep);
    REQUIRE(conforms(j, load_schema("mermin_report.schema.json")));
    REQUIRE(j["total"] == 4.0);
    REQUIRE(j["verdict"] == "VIOLATED");
}

TEST_CASE("chain report serialization validates against its schema") {
    const ScenarioData d = build_chained_switch({4});
    const nlohmann::json j = to_json(eval_chain_causal(d, 4));
    REQUIRE(conforms(j, load_schema("chain_report.schema.json")));
    REQUIRE(j["N"] == 4);
    REQUIRE(j["verdict"] == "VIOLATED");
}

TEST_CASE("certificate serialization validates against its schema") {
    const nlohmann::json j =
        to_json(replay_possibilistic_contradiction(build_ghz_three_switch({})));
    REQUIRE(conforms(j, load_schema("proof_certificate.schema.json")));
    REQUIRE(j["verdict"] == "INFEASIBLE");
    REQUIRE(j["conditions"].size() >= 13);
}

TEST_CASE("suite result serialization validates and omits timing") {
    SuiteResult suite;
    suite.checks.push_back({"demo", true, 0.5, 1.0, "detail"});
    suite.elapsed_seconds = 12.0;
    const nlohmann::json j = to_json(suite);
    REQUIRE(conforms(j, load_schema("suite_result.schema.json")));
    REQUIRE_FALSE(j.contains("elapsedSeconds"));
    REQUIRE(j.dump() == to_json(suite).dump());
}

TEST_CASE("scenario serialization embeds tables and the config echo") {
    const ScenarioData d = build_chained_switch({2});
    const nlohmann::json j = to_json(d);
    REQUIRE(conforms(j, load_schema("scenario_data.schema.json")));
    REQUIRE(conforms(j["joint"], load_schema("table.schema.json")));
    REQUIRE(j["config"]["kind"] == "chained-switch");
    REQUIRE(j["config"]["n"] == 2);
}
