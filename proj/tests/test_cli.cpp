#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct CmdResult {
    int code = -1;
    std::string out;
};

CmdResult run_cli(const std::string& args) {
    const std::string cmd = std::string(CLI_BINARY) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CmdResult r;
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.code = WEXITSTATUS(status);
    return r;
}

std::string scenario(const std::string& name) {
    return std::string(SCENARIO_DIR) + "/" + name;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing file: " << path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("solve reports atom values and residuals") {
    const CmdResult r = run_cli("solve --scenario " + scenario("solve_linear.json") +
                                " --json");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["status"] == "ok");
    CHECK(j["result"]["atom_values"][0].get<double>() == doctest::Approx(1.0));
    CHECK(j["result"]["atom_values"][1].get<double>() == doctest::Approx(3.0));
    CHECK(j["result"]["max_residual"].get<double>() <= 1e-10);
    CHECK(j["result"]["residuals"].size() == 4);
    CHECK(j["seed"] == 0);
}

TEST_CASE("choquet solve exits 2 with a pasting diagnosis") {
    const CmdResult r = run_cli("solve --scenario " + scenario("solve_choquet.json") +
                                " --json");
    CHECK(r.code == 2);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["status"] == "error");
    CHECK(j["error"].get<std::string>().find("pasting") != std::string::npos);
}

TEST_CASE("validation failures exit 3") {
    CHECK(run_cli("solve --scenario " + scenario("bad_length.json")).code == 3);
    CHECK(run_cli("solve --scenario " + scenario("empty_grid.json")).code == 3);
    CHECK(run_cli("solve --scenario /nonexistent.json").code == 3);
}

TEST_CASE("axiom table: entropic passes, choquet records a failure") {
    const CmdResult ok = run_cli("check-axioms --scenario " +
                                 scenario("axioms_entropic.json") + " --json");
    REQUIRE(ok.code == 0);
    const auto jok = nlohmann::json::parse(ok.out);
    for (const auto& row : jok["axioms"]) CHECK(row["verdict"] != "fail");

    const CmdResult bad = run_cli("check-axioms --scenario " +
                                  scenario("axioms_choquet.json") + " --json");
    CHECK(bad.code == 2);
    const auto jbad = nlohmann::json::parse(bad.out);
    bool any_fail = false;
    for (const auto& row : jbad["axioms"])
        if (row["verdict"] == "fail") {
            any_fail = true;
            CHECK(row.contains("witness"));
        }
    CHECK(any_fail);
}

TEST_CASE("represent reports classification and verdicts") {
    const CmdResult r = run_cli("represent --scenario " +
                                scenario("represent_qa_exp.json") + " --json");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["pi_g"] == "nonempty");
    CHECK(j["order_preserving"] == true);
    CHECK(j["refinement_consistent"] == true);
    for (const auto& p : j["induced_probability"])
        CHECK(p.get<double>() == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("risk round trip passes for entropic and fails for the variance fixture") {
    const CmdResult ok = run_cli("risk-roundtrip --scenario " +
                                 scenario("risk_entropic.json") + " --json");
    REQUIRE(ok.code == 0);
    const auto j = nlohmann::json::parse(ok.out);
    CHECK(j["round_trip"]["max_residual"].get<double>() <= 1e-8);

    const CmdResult bad = run_cli("risk-roundtrip --scenario " +
                                  scenario("risk_variance.json") + " --json");
    CHECK(bad.code == 2);
    const auto jb = nlohmann::json::parse(bad.out);
    CHECK(jb["status"] == "fail");
    CHECK_FALSE(jb.contains("round_trip"));  // reconstruction skipped
}

TEST_CASE("text report is a rendering of the JSON report") {
    const CmdResult text = run_cli("solve --scenario " + scenario("solve_linear.json"));
    CHECK(text.code == 0);
    CHECK(text.out.find("== solve ==") != std::string::npos);
    CHECK(text.out.find("max_residual") != std::string::npos);
}

TEST_CASE("identical scenario and seed give byte-identical reports") {
    const std::string args = "check-axioms --scenario " +
                             scenario("axioms_entropic.json") + " --json --seed 7";
    const CmdResult a = run_cli(args);
    const CmdResult b = run_cli(args);
    CHECK(a.out == b.out);
}

TEST_CASE("golden reports are byte-stable") {
    const std::array<std::pair<const char*, const char*>, 6> cases{{
        {"solve", "solve_linear"},
        {"solve", "solve_entropic"},
        {"check-axioms", "axioms_entropic"},
        {"check-axioms", "axioms_choquet"},
        {"represent", "represent_qa_exp"},
        {"risk-roundtrip", "risk_entropic"},
    }};
    for (const auto& [cmd, name] : cases) {
        INFO(name);
        const CmdResult r = run_cli(std::string(cmd) + " --scenario " +
                                    scenario(std::string(name) + ".json") + " --json");
        const std::string golden =
            read_file(std::string(GOLDEN_DIR) + "/" + name + ".json");
        CHECK(r.out == golden);
    }
}
