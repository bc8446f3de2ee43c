// End-to-end tests of the command-line tool: each case invokes the real
// binary (path injected as WRB_BIN), captures stdout+stderr, and checks the
// exit code against the documented contract.

#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "wrb/io.hpp"
#include "wrb/space.hpp"

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

std::filesystem::path work_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "wrb_cli_test";
    std::filesystem::create_directories(dir);
    return dir;
}

RunResult run(const std::string& args) {
    const auto capture = (work_dir() / "stdout.txt").string();
    const std::string cmd = std::string(WRB_BIN) + " " + args + " > " + capture +
                            " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(capture);
    std::ostringstream out;
    out << in.rdbuf();
    result.output = out.str();
    return result;
}

std::string fixture(const std::string& name) {
    return (work_dir() / name).string();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST_CASE("missing subcommand is an argument error", "[cli]") {
    CHECK(run("").exit_code == 2);
    CHECK(run("frobnicate").exit_code == 2);
}

TEST_CASE("space circle builds, validates, and writes a file", "[cli]") {
    const auto out = fixture("circle16.json");
    const auto r = run("space circle --m 16 --out " + out);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("valid space: n=16") != std::string::npos);
    const auto s = wrb::read_space(out);
    CHECK(s.n == 16);

    CHECK(run("space circle --m 2").exit_code == 2);
    CHECK(run("space circle").exit_code == 2);
}

TEST_CASE("space sphere reports the grid size", "[cli]") {
    const auto r = run("space sphere --lat 5 --lon 8 --out " + fixture("sphere.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("valid space: n=42") != std::string::npos);
}

TEST_CASE("disconnected graph input is a validation failure", "[cli]") {
    write_text(fixture("disconnected.json"),
               R"({"n": 4, "edges": [[0, 1, 1.0], [2, 3, 1.0]]})");
    const auto r = run("space graph --edges " + fixture("disconnected.json"));
    CHECK(r.exit_code == 3);

    write_text(fixture("connected.json"),
               R"({"n": 3, "edges": [[0, 1, 1.0], [1, 2, 0.5]]})");
    CHECK(run("space graph --edges " + fixture("connected.json")).exit_code == 0);
}

TEST_CASE("barycenter command reproduces the alternating fixture", "[cli]") {
    const auto space_path = fixture("circle16.json");
    wrb::write_space(space_path, wrb::build_circle(16));
    const auto measure_path = fixture("mu16.json");
    write_text(measure_path,
               R"({"atoms": [{"index": 0, "mass": 0.25}, {"index": 4, "mass": 0.25},)"
               R"( {"index": 8, "mass": 0.25}, {"index": 12, "mass": 0.25}]})");
    const auto out = fixture("result16.json");
    const auto r = run("barycenter --space " + space_path + " --measure " +
                       measure_path + " --out " + out);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("b_set_size=4") != std::string::npos);
    CHECK(r.output.find("supp_B_size=4") != std::string::npos);

    const auto j = nlohmann::json::parse(std::ifstream(out));
    CHECK(j["b_set"].get<std::vector<int>>() == std::vector<int>({2, 6, 10, 14}));
    for (int y = 0; y < 16; ++y)
        CHECK(j["B"]["weights"][y].get<double>() == (y % 4 == 2 ? 0.25 : 0.0));
}

TEST_CASE("malformed measure input is an argument error", "[cli]") {
    const auto space_path = fixture("circle8.json");
    wrb::write_space(space_path, wrb::build_circle(8));
    const auto measure_path = fixture("bad_mu.json");
    write_text(measure_path, R"({"weights": [0.5, 0.4, 0, 0, 0, 0, 0, 0]})");
    const auto r = run("barycenter --space " + space_path + " --measure " +
                       measure_path);
    CHECK(r.exit_code == 2);
}

TEST_CASE("sweep on a dirac converges immediately", "[cli]") {
    const auto space_path = fixture("circle12.json");
    wrb::write_space(space_path, wrb::build_circle(12));
    const auto measure_path = fixture("dirac5.json");
    write_text(measure_path, R"({"atoms": [{"index": 5, "mass": 1.0}]})");
    const auto csv = fixture("sweep.csv");
    const auto r = run("sweep --space " + space_path + " --measure " +
                       measure_path + " --out " + csv);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("final_gap=0") != std::string::npos);
    std::ifstream in(csv);
    std::string header;
    REQUIRE(std::getline(in, header));
    CHECK(header == "eps,f_value,gap,support_size");
}

TEST_CASE("sweep without snapping stalls on a near-tie", "[cli]") {
    const auto space_path = fixture("circle4.json");
    wrb::write_space(space_path, wrb::build_circle(4));
    const auto measure_path = fixture("near_tie.json");
    wrb::Measure mu;
    mu.weights = {0.5, 1e-14, 0.5 - 1e-14, 0.0};
    wrb::write_measure(measure_path, mu);
    const auto csv = fixture("stalled.csv");
    const auto r = run("sweep --space " + space_path + " --measure " +
                       measure_path + " --out " + csv + " --no-snap --gap-tol 0" +
                       " --max-steps 30");
    CHECK(r.exit_code == 4);
    CHECK(r.output.find("no convergence") != std::string::npos);
    // the path is still written for inspection
    std::ifstream in(csv);
    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 31);
}

TEST_CASE("orbit command detects the two-cycle and writes both outputs", "[cli]") {
    const auto space_path = fixture("circle16.json");
    wrb::write_space(space_path, wrb::build_circle(16));
    const auto measure_path = fixture("mu16.json");
    write_text(measure_path,
               R"({"atoms": [{"index": 0, "mass": 0.25}, {"index": 4, "mass": 0.25},)"
               R"( {"index": 8, "mass": 0.25}, {"index": 12, "mass": 0.25}]})");
    const auto csv = fixture("orbit.csv");
    const auto sidecar = fixture("orbit_measures.json");
    const auto r = run("orbit --space " + space_path + " --measure " +
                       measure_path + " --out " + csv + " --measures-out " +
                       sidecar);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("period=2 entry=0") != std::string::npos);

    std::ifstream in(csv);
    std::string header;
    REQUIRE(std::getline(in, header));
    CHECK(header == "iter,variance,support_size,w2_to_prev");

    const auto j = nlohmann::json::parse(std::ifstream(sidecar));
    CHECK(j["period"].get<int>() == 2);
    CHECK(j["iterates"].size() == 3);
}

TEST_CASE("w2 command prints the quarter-circle distance", "[cli]") {
    const auto space_path = fixture("circle8.json");
    wrb::write_space(space_path, wrb::build_circle(8));
    write_text(fixture("a8.json"),
               R"({"atoms": [{"index": 0, "mass": 0.5}, {"index": 4, "mass": 0.5}]})");
    write_text(fixture("b8.json"),
               R"({"atoms": [{"index": 2, "mass": 0.5}, {"index": 6, "mass": 0.5}]})");
    const auto plan_path = fixture("plan.json");
    const auto r = run("w2 --space " + space_path + " --a " + fixture("a8.json") +
                       " --b " + fixture("b8.json") + " --plan-out " + plan_path);
    CHECK(r.exit_code == 0);
    const auto pos = r.output.find("w2=");
    REQUIRE(pos != std::string::npos);
    const double value = std::strtod(r.output.c_str() + pos + 3, nullptr);
    CHECK(std::abs(value - M_PI / 2.0) < 1e-12);

    const auto j = nlohmann::json::parse(std::ifstream(plan_path));
    CHECK(j.contains("entries"));
    CHECK(j.contains("dual_source"));
}

TEST_CASE("variance command prints the value and argmin set", "[cli]") {
    const auto space_path = fixture("circle8.json");
    wrb::write_space(space_path, wrb::build_circle(8));
    write_text(fixture("dirac3.json"), R"({"atoms": [{"index": 3, "mass": 1.0}]})");
    const auto r = run("variance --space " + space_path + " --measure " +
                       fixture("dirac3.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("variance=0") != std::string::npos);
    CHECK(r.output.find("argmin=[3]") != std::string::npos);
}

TEST_CASE("check command runs the seeded property suite", "[cli]") {
    const auto r = run("check --seed 42 --trials 25");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("PASS metric-axioms") != std::string::npos);
    CHECK(r.output.find("PASS rotation-equivariance") != std::string::npos);
    CHECK(r.output.find("FAIL") == std::string::npos);

    CHECK(run("check --seed 42 --trials 0").exit_code == 2);
    CHECK(run("check --trials 5").exit_code == 2);
}

TEST_CASE("check command flags an injected asymmetric space", "[cli]") {
    const auto bad = fixture("asym.json");
    write_text(bad, R"({"n": 3,)"
                    R"( "dist": [[0, 1, 1], [2, 0, 1], [1, 1, 0]],)"
                    R"( "m": [0.34, 0.33, 0.33]})");
    const auto r = run("check --seed 42 --trials 5 --space " + bad);
    CHECK(r.exit_code == 6);
    CHECK(r.output.find("FAIL metric-axioms") != std::string::npos);
    CHECK(r.output.find("asymmetric") != std::string::npos);
    CHECK(r.output.find("failing properties: metric-axioms") != std::string::npos);
}
