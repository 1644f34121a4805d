#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(SWITCHLAB_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult res;
    std::array<char, 4096> buf;
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) {
        res.output.append(buf.data(), n);
        if (n < buf.size()) break;
    }
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::filesystem::path artifact_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "switchlab_cli_test";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("usage errors exit with status 2") {
    REQUIRE(run_cli("").exit_code == 2);
    REQUIRE(run_cli("no-such-command").exit_code == 2);
    REQUIRE(run_cli("chained --sweep nonsense").exit_code == 2);
    REQUIRE(run_cli("--help").exit_code == 0);
}

TEST_CASE("ghz-mermin writes the expected report and is byte-stable") {
    const auto json_path = artifact_dir() / "mermin.json";
    const CliResult res = run_cli("ghz-mermin --json " + json_path.string());
    REQUIRE(res.exit_code == 0);
    REQUIRE(res.output.find("VIOLATED") != std::string::npos);

    const std::string first = slurp(json_path);
    const nlohmann::json j = nlohmann::json::parse(first);
    REQUIRE(j["total"] == 4.0);
    REQUIRE(j["verdict"] == "VIOLATED");

    REQUIRE(run_cli("ghz-mermin --json " + json_path.string()).exit_code == 0);
    REQUIRE(slurp(json_path) == first);
}

TEST_CASE("noisy ghz-mermin reports failure through the exit status") {
    REQUIRE(run_cli("ghz-mermin --noise 0.5").exit_code == 1);
}

TEST_CASE("possibilistic replay certifies infeasibility") {
    const auto json_path = artifact_dir() / "certificate.json";
    const CliResult res = run_cli("possibilistic --json " + json_path.string());
    REQUIRE(res.exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(slurp(json_path));
    REQUIRE(j["verdict"] == "INFEASIBLE");
    REQUIRE(run_cli("possibilistic --noise 0.3").exit_code == 1);
}

TEST_CASE("chained sweep emits one CSV row per n") {
    const auto csv_path = artifact_dir() / "bc.csv";
    const CliResult res = run_cli("chained --sweep 2:12 --csv " + csv_path.string());
    REQUIRE(res.exit_code == 0);

    std::ifstream in(csv_path);
    std::string line;
    REQUIRE(std::getline(in, line));
    REQUIRE(line == "N,bcValue,alpha,constrainedValue,classicalBound,algebraicMax,"
                    "closedForm,causalFractionBound");
    int rows = 0;
    double n9_constrained = 0.0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++rows;
        std::stringstream ss(line);
        std::string field;
        std::getline(ss, field, ',');
        if (field == "9") {
            std::getline(ss, field, ','); // bcValue
            std::getline(ss, field, ','); // alpha
            std::getline(ss, field, ','); // constrainedValue
            n9_constrained = std::stod(field);
        }
    }
    REQUIRE(rows == 11);
    REQUIRE(n9_constrained == Catch::Approx(18.510565163).margin(1e-9));
}

TEST_CASE("single-n chained run writes a report array") {
    const auto json_path = artifact_dir() / "chain.json";
    REQUIRE(run_cli("chained --n 3 --json " + json_path.string()).exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(slurp(json_path));
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 1);
    REQUIRE(j[0]["N"] == 3);
    REQUIRE(j[0]["verdict"] == "NOT_VIOLATED");
}

TEST_CASE("enumerate-hco reports the unique extension") {
    const auto json_path = artifact_dir() / "enum.json";
    REQUIRE(run_cli("enumerate-hco --json " + json_path.string()).exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(slurp(json_path));
    REQUIRE(j["support"] == 5);
    REQUIRE(j["candidates"] == 243);
    REQUIRE(j["valid"] == 1);
    REQUIRE(j["forcedDeterminism"] == true);
}

TEST_CASE("random-models smoke run passes") {
    const auto json_path = artifact_dir() / "models.json";
    REQUIRE(run_cli("random-models --seeds 25 --json " + json_path.string()).exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(slurp(json_path));
    REQUIRE(j["pass"] == true);
}

TEST_CASE("selfcheck reports injected noise as check failures") {
    const auto json_path = artifact_dir() / "suite.json";
    const CliResult res = run_cli(
        "selfcheck --inject-noise 0.5 --mermin-seeds 2 --chained-seeds 2 --table-seeds 2 --json "
        + json_path.string());
    REQUIRE(res.exit_code == 1);
    const nlohmann::json j = nlohmann::json::parse(slurp(json_path));
    REQUIRE(j["allPass"] == false);
    bool data_condition_failed = false;
    for (const auto& c : j["checks"]) {
        if (c["name"] == "02_switch_data_conditions") data_condition_failed = !c["pass"];
    }
    REQUIRE(data_condition_failed);
}
