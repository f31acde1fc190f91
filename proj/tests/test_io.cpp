#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <takeover/cli.hpp>
#include <takeover/errors.hpp>
#include <takeover/spec_io.hpp>
#include <vector>

using namespace takeover;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool contains(const std::vector<std::string>& issues, const std::string& needle) {
    for (const auto& s : issues)
        if (s.find(needle) != std::string::npos) return true;
    return false;
}

const char* kChainSpec = R"({
  "model": "dual_deter",
  "horizon": 2,
  "chain_length": 2,
  "dynamics": {"f": 1.0},
  "costs": {"g": {"0": 0.5, "1": 1.0, "2": 1.5}, "d": 0.4, "a": 0.6}
})";

const char* kGridSpecText = R"({
  "model": "general",
  "horizon": 2,
  "nodes": ["A", "B"],
  "edges": [["A", "B"], ["B", "A"]],
  "state_grid": [0.5, 1.0, 2.0],
  "grid_dynamics": {
    "A": {"factor": 2.0},
    "B": {"map": [0, 1, 2]}
  },
  "grid_costs": {
    "g": {"A": [0.25, 1.0, 4.0], "B": [0.5, 2.0, 8.0]},
    "d": {"A": [0.1, 0.4, 1.6], "B": [0.1, 0.4, 1.6]},
    "a": {"A": [0.05, 0.2, 0.8], "B": [0.05, 0.2, 0.8]}
  }
})";

fs::path fresh_dir(const char* leaf) {
    fs::path dir = fs::temp_directory_path() / leaf;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(std::vector<std::string> args) {
    std::vector<const char*> argv;
    argv.push_back("takeover");
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli_main((int)argv.size(), argv.data());
}

}  // namespace

TEST_CASE("bundled outbreak example parses to the documented shape") {
    SpecDocument doc = parse_spec_text(bundled_example_json("sird"));
    CHECK(doc.model == ModelKind::scalar_lq);
    CHECK(doc.horizon == 20);
    REQUIRE(doc.node_names == std::vector<std::string>{"S", "I", "R", "D"});
    // infected node reaches every other state; its option list is own-first
    CHECK(doc.scalar.graph.actions[1] == std::vector<int>{1, 0, 2, 3});
    CHECK(doc.scalar.graph.actions[3] == std::vector<int>{3});
    CHECK(doc.scalar.g[0] == std::vector<double>{1.5, 2.2, 1.0, 2.5});
    CHECK(doc.scalar.g.size() == 21);
    CHECK(doc.scalar.f[7] == std::vector<double>{1.0, 1.0, 1.0, 1.0});
}

TEST_CASE("bundled market example parses") {
    SpecDocument doc = parse_spec_text(bundled_example_json("stock-market"));
    CHECK(doc.model == ModelKind::scalar_lq);
    CHECK(doc.horizon == 20);
    REQUIRE(doc.node_names.size() == 3);
    // fully connected: every node sees both others
    for (int v = 0; v < 3; ++v) CHECK(doc.scalar.graph.actions[v].size() == 3);
    // state costs ramp over the horizon: strictly larger late than early
    CHECK(doc.scalar.g[20][0] > doc.scalar.g[0][0]);
}

TEST_CASE("compiled-in example texts match the files in data/") {
    CHECK(bundled_example_json("sird") == slurp(fs::path(TAKEOVER_DATA_DIR) / "sird.json"));
    CHECK(bundled_example_json("stock-market") ==
          slurp(fs::path(TAKEOVER_DATA_DIR) / "stock_market.json"));
    CHECK_THROWS_AS(bundled_example_json("nope"), SpecError);
}

TEST_CASE("spec validation collects independent violations with paths") {
    const char* text = R"({
      "model": "scalar_lq",
      "horizon": 2,
      "nodes": ["A", "B"],
      "edges": [["A", "B"], ["A", "C"]],
      "surprise": 1,
      "dynamics": {"f": 1.0},
      "costs": {"g": {"A": 1.0, "Z": 0.5}, "d": 0.1, "a": 0.1}
    })";
    try {
        parse_spec_text(text);
        FAIL("expected SpecError");
    } catch (const SpecError& e) {
        CHECK(e.issues.size() >= 4);
        CHECK(contains(e.issues, "unknown node \"C\""));
        CHECK(contains(e.issues, "unknown key \"surprise\""));
        CHECK(contains(e.issues, "costs.g.Z"));
        CHECK(contains(e.issues, "missing entry for node \"B\""));
    }
}

TEST_CASE("negative costs are rejected with a path-tagged message") {
    try {
        parse_spec_text(R"({"model": "scalar_lq", "horizon": 1, "nodes": ["A"],
          "edges": [], "dynamics": {"f": 1.0}, "costs": {"g": -1.0, "d": 0, "a": 0}})");
        FAIL("expected SpecError");
    } catch (const SpecError& e) {
        CHECK(contains(e.issues, "nonnegative"));
        CHECK(contains(e.issues, "costs.g"));
    }
}

TEST_CASE("spec parse failures carry useful messages") {
    CHECK_THROWS_AS(parse_spec_text("{ not json"), SpecError);
    CHECK_THROWS_AS(parse_spec_text("[1,2,3]"), SpecError);
    try {
        parse_spec_text(R"({"model": "mystery", "horizon": 1})");
        FAIL("expected SpecError");
    } catch (const SpecError& e) {
        CHECK(contains(e.issues, "unknown model"));
    }
    try {
        parse_spec_text(R"({"model": "dual_deter", "horizon": 1, "chain_length": 0,
                            "dynamics": {"f": 1.0}, "costs": {"g": 0, "d": 0, "a": 0}})");
        FAIL("expected SpecError");
    } catch (const SpecError& e) {
        CHECK(contains(e.issues, "chain_length"));
    }
    try {
        parse_spec_text(R"({"model": "scalar_lq", "horizon": 1,
                            "nodes": ["A", "A"], "edges": [],
                            "dynamics": {"f": 1.0}, "costs": {"g": 0, "d": 0, "a": 0}})");
        FAIL("expected SpecError");
    } catch (const SpecError& e) {
        CHECK(contains(e.issues, "duplicate node name"));
    }
    CHECK_THROWS_AS(load_spec_file("/nonexistent/path/spec.json"), SpecError);
}

TEST_CASE("minimal one-node spec solves") {
    SpecDocument doc = parse_spec_text(R"({
      "model": "scalar_lq", "horizon": 1, "nodes": ["A"], "edges": [],
      "dynamics": {"f": 2.0}, "costs": {"g": 0.5, "d": 0.0, "a": 0.0}
    })");
    ResultBundle b = solve_document(doc);
    REQUIRE(b.scalar.p.size() == 2);
    // single idle option: p0 = g + f^2 * g_terminal
    CHECK(b.scalar.p[1][0] == 0.5);
    CHECK(b.scalar.p[0][0] == doctest::Approx(0.5 + 4.0 * 0.5).epsilon(1e-15));
}

TEST_CASE("chain spec solves with an audit trail and tau labels") {
    SpecDocument doc = parse_spec_text(kChainSpec);
    CHECK(doc.model == ModelKind::dual_deter);
    CHECK(doc.node_names == std::vector<std::string>{"0", "1", "2"});

    ResultBundle b = solve_document(doc);
    CHECK(b.branches.size() == 6);  // horizon 2 x 3 nodes

    std::string js = emit_json(b);
    auto parsed = nlohmann::json::parse(js);
    CHECK(parsed["model"] == "dual_deter");
    CHECK(parsed["branches"].size() == 6);
    for (const auto& rec : parsed["branches"]) {
        CHECK(rec.contains("k"));
        CHECK(rec.contains("node"));
        CHECK(rec.contains("branch"));
        CHECK(rec.contains("closed_value"));
        CHECK(rec.contains("lp_value"));
        CHECK(rec.contains("agreed"));
        CHECK(rec.contains("used_lp"));
    }
    // end nodes label their takeover option "tau"; the interior never does
    CHECK(parsed["actions"]["0"]["defender"] == nlohmann::json({"0", "tau"}));
    CHECK(parsed["actions"]["0"]["adversary"] == nlohmann::json({"0", "tau"}));
    CHECK(parsed["actions"]["1"]["defender"] == nlohmann::json({"1", "0"}));
    CHECK(parsed["actions"]["1"]["adversary"] == nlohmann::json({"1", "2"}));
    CHECK(parsed["actions"]["2"]["defender"] == nlohmann::json({"2", "tau"}));

    std::string csv = emit_policy_csv(b, Side::defender);
    CHECK(csv.find("tau") != std::string::npos);
}

TEST_CASE("grid spec parses, snaps factors, and solves") {
    SpecDocument doc = parse_spec_text(kGridSpecText);
    CHECK(doc.model == ModelKind::general);
    REQUIRE(doc.grid.grid == std::vector<double>{0.5, 1.0, 2.0});
    // factor 2 snapped onto the grid: 1 -> 2 -> 4 clamps to the top point
    CHECK(doc.grid.dynamics[0][0] == std::vector<int>{1, 2, 2});
    CHECK(doc.grid.dynamics[1][1] == std::vector<int>{0, 1, 2});

    ResultBundle b = solve_document(doc);
    std::string js = emit_json(b);
    auto parsed = nlohmann::json::parse(js);
    CHECK(parsed["model"] == "general");
    CHECK(parsed["grid"].size() == 3);
    CHECK(parsed["values"].size() == 3);  // horizon + 1 rows
    CHECK_FALSE(parsed.contains("coefficients"));

    std::string values = emit_values_csv(b);
    std::istringstream lines(values);
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line == "k,node,x,value");
    int rows = 0;
    while (std::getline(lines, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 3 * 2 * 3);  // (horizon+1) stages  x  2 nodes  x  3 grid points
}

TEST_CASE("json result output is byte-stable across runs") {
    SpecDocument doc1 = parse_spec_text(bundled_example_json("sird"));
    SpecDocument doc2 = parse_spec_text(bundled_example_json("sird"));
    std::string a = emit_json(solve_document(doc1));
    std::string b = emit_json(solve_document(doc2, RunMode::serial));
    CHECK(a == b);

    auto parsed = nlohmann::json::parse(a);
    CHECK(parsed["solver_version"].is_string());
    std::string hash = parsed["spec_hash"];
    REQUIRE(hash.size() == std::string("fnv1a64:").size() + 16);
    CHECK(hash.substr(0, 8) == "fnv1a64:");
    CHECK(parsed["horizon"] == 20);
    CHECK(parsed["nodes"] == nlohmann::json({"S", "I", "R", "D"}));
    CHECK(parsed["coefficients"].size() == 21);
    CHECK(parsed["coefficients"][0].size() == 4);
    CHECK(parsed["policy_defender"].size() == 20);
    CHECK_FALSE(parsed.contains("simulation"));
}

TEST_CASE("values csv covers every stage including the terminal row") {
    ResultBundle b = solve_document(parse_spec_text(bundled_example_json("sird")));
    std::string values = emit_values_csv(b);
    std::istringstream lines(values);
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line == "k,node,coefficient");
    int rows = 0;
    bool saw_terminal = false;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        ++rows;
        if (line.rfind("21,D,", 0) == 0) {
            saw_terminal = true;
            CHECK(line == "21,D,2.5");
        }
    }
    CHECK(rows == 21 * 4);
    CHECK(saw_terminal);
}

TEST_CASE("policy csv probabilities sum to one per decision point") {
    ResultBundle b = solve_document(parse_spec_text(bundled_example_json("sird")));
    for (Side side : {Side::defender, Side::adversary}) {
        std::string csv = emit_policy_csv(b, side);
        CHECK(csv.find("tau") == std::string::npos);  // graph games name real targets
        std::istringstream lines(csv);
        std::string line;
        std::getline(lines, line);  // header
        std::map<std::string, double> sums;
        while (std::getline(lines, line)) {
            if (line.empty()) continue;
            size_t p1 = line.find(',');
            size_t p2 = line.find(',', p1 + 1);
            size_t p3 = line.find(',', p2 + 1);
            REQUIRE(p3 != std::string::npos);
            sums[line.substr(0, p2)] += std::stod(line.substr(p3 + 1));
        }
        CHECK(sums.size() == 20 * 4);
        for (const auto& [key, sum] : sums) {
            INFO("decision point ", key);
            CHECK(std::abs(sum - 1.0) <= 1e-9);
        }
    }
}

TEST_CASE("command line round trip") {
    fs::path dir = fresh_dir("takeover_test_cli");

    SUBCASE("example, solve, verify, simulate all succeed") {
        CHECK(run_cli({"example", "sird", "--out", dir.string()}) == 0);
        fs::path spec = dir / "sird.json";
        REQUIRE(fs::exists(spec));
        CHECK(slurp(spec) == bundled_example_json("sird"));

        CHECK(run_cli({"solve", spec.string(), "--out", dir.string()}) == 0);
        REQUIRE(fs::exists(dir / "result.json"));
        auto parsed = nlohmann::json::parse(slurp(dir / "result.json"));
        CHECK(parsed["model"] == "scalar_lq");

        CHECK(run_cli({"solve", spec.string(), "--out", dir.string(), "--format", "csv"}) == 0);
        CHECK(fs::exists(dir / "values.csv"));
        CHECK(fs::exists(dir / "policy_defender.csv"));
        CHECK(fs::exists(dir / "policy_adversary.csv"));

        CHECK(run_cli({"verify", spec.string()}) == 0);

        CHECK(run_cli({"simulate", spec.string(), "--samples", "2000", "--seed", "7", "--x1", "1.5",
                       "--alpha1", "I", "--out", dir.string()}) == 0);
        auto simmed = nlohmann::json::parse(slurp(dir / "result.json"));
        REQUIRE(simmed.contains("simulation"));
        CHECK(simmed["simulation"]["samples"] == 2000);
        CHECK(simmed["simulation"]["start_node"] == "I");
        double mean = simmed["simulation"]["mean"];
        double se = simmed["simulation"]["std_error"];
        double sv = simmed["simulation"]["solver_value"];
        CHECK(std::abs(mean - sv) <= 6.0 * se);
    }

    SUBCASE("stock market example verifies too") {
        CHECK(run_cli({"example", "stock-market", "--out", dir.string()}) == 0);
        fs::path spec = dir / "stock_market.json";
        REQUIRE(fs::exists(spec));
        CHECK(run_cli({"verify", spec.string(), "--serial"}) == 0);
    }

    SUBCASE("usage and validation failures exit 1") {
        CHECK(run_cli({}) == 1);
        CHECK(run_cli({"example", "nope", "--out", dir.string()}) == 1);
        CHECK(run_cli({"solve", (dir / "missing.json").string()}) == 1);

        fs::path bad = dir / "bad.json";
        std::ofstream(bad) << "{ not json";
        CHECK(run_cli({"solve", bad.string()}) == 1);

        fs::path negative = dir / "negative.json";
        std::ofstream(negative) << R"({"model": "scalar_lq", "horizon": 1, "nodes": ["A"],
          "edges": [], "dynamics": {"f": 1.0}, "costs": {"g": -2.0, "d": 0, "a": 0}})";
        CHECK(run_cli({"solve", negative.string()}) == 1);
    }

    SUBCASE("chain spec through the cli") {
        fs::path spec = dir / "chain.json";
        std::ofstream(spec) << kChainSpec;
        CHECK(run_cli({"solve", spec.string(), "--out", dir.string()}) == 0);
        CHECK(run_cli({"verify", spec.string()}) == 0);
    }

    SUBCASE("grid spec through the cli") {
        fs::path spec = dir / "grid.json";
        std::ofstream(spec) << kGridSpecText;
        CHECK(run_cli({"solve", spec.string(), "--out", dir.string()}) == 0);
        CHECK(run_cli({"verify", spec.string()}) == 0);
        CHECK(run_cli({"simulate", spec.string(), "--samples", "500", "--x1", "0.9", "--alpha1", "B",
                       "--out", dir.string()}) == 0);
        auto parsed = nlohmann::json::parse(slurp(dir / "result.json"));
        // 0.9 snaps to the nearest grid point, 1.0
        CHECK(parsed["simulation"]["x1"] == 1.0);
    }
}
