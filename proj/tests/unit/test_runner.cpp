#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "amenable/runner.hpp"

namespace fs = std::filesystem;
using namespace amenable::runner;

namespace {

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("amenable_runner_test_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const Json kTile = Json::parse(R"({"experiment": "tile", "seed": 5,
    "params": {"target_shape": [600], "k_shape": [20], "eps": 0.3, "beta": 0.1, "delta": 0.4, "zeta": 0.19}})");

}  // namespace

TEST_CASE("every experiment kind is listed") {
    std::vector<std::string> kinds;
    for (const auto& e : experiments()) kinds.push_back(e.kind);
    CHECK(kinds == std::vector<std::string>{"boundary-suite", "tile", "stp", "ustp", "ergodic", "ids", "percolation",
                                            "continuity"});
}

TEST_CASE("invalid configs exit 2 and write nothing") {
    const auto out = scratch("invalid");
    const char* bad[] = {
        R"({"params": {}})",
        R"({"experiment": "nope"})",
        R"({"experiment": "tile", "surplus": 1})",
        R"({"experiment": "tile", "params": {"eps": "0.3"}})",
        R"({"experiment": "tile", "params": {"eps": 0.7}})",
        R"({"experiment": "percolation", "params": {"q": 1.0}})",
        R"({"experiment": "ids", "params": {"group": "Z2", "reference": "z_adjacency"}})",
        R"({"experiment": "ergodic", "params": {"coloring": {"rule": "periodic", "alphabet": 2, "periods": [2], "table": [0, 1]}}})",
        R"({"experiment": "stp", "caps": {"max_family": 0}})",
    };
    for (const char* text : bad) {
        const auto r = run_json(Json::parse(text), out);
        CHECK_MESSAGE(r.exit_code == kInvalidConfig, text, " -> ", r.message);
        CHECK_FALSE(fs::exists(out));
    }
    const auto cfg = out.parent_path() / "broken.json";
    fs::create_directories(cfg.parent_path());
    std::ofstream(cfg) << "{\"experiment\": ";
    CHECK(run_file(cfg, out).exit_code == kInvalidConfig);
    CHECK(run_file(out / "missing.json", out).exit_code == kInvalidConfig);
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("resolved config materializes every default") {
    const auto r = resolve_config(Json::parse(R"({"experiment": "percolation"})"));
    CHECK(r.at("seed") == 1);
    CHECK(r.at("output_dir") == "out");
    CHECK(r.at("caps").at("max_matrix_size") == 6000);
    CHECK(r.at("params").at("q") == 0.5);
    CHECK(r.at("params").at("window_shape") == Json::array({100000}));
    CHECK(r.at("params").at("additivity").at("groups").size() == 2);
    // resolving twice is a fixed point
    CHECK(resolve_config(r) == r);
}

TEST_CASE("reruns are byte identical and reports re-verify") {
    const auto a = scratch("rerun_a"), b = scratch("rerun_b");
    const auto ra = run_json(kTile, a), rb = run_json(kTile, b);
    REQUIRE_MESSAGE(ra.exit_code == kOk, ra.message);
    REQUIRE(rb.exit_code == kOk);
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(a / "results")) {
        ++files;
        CHECK(slurp(e.path()) == slurp(b / "results" / e.path().filename()));
    }
    CHECK(files == 4);

    const auto summary = Json::parse(slurp(a / "results" / "summary.json"));
    CHECK(summary.at("status") == "passed");
    CHECK(summary.at("config").at("params").at("control") == "forward");
    CHECK(verify_file(a / "results" / "verification.json").exit_code == kOk);

    // a doctored measurement no longer matches its recorded outcome
    auto v = Json::parse(slurp(a / "results" / "verification.json"));
    v["checks"][0]["measured"] = 1e300;
    v["checks"][0]["relation"] = "<=";
    v["checks"][0]["bound"] = 0.0;
    std::ofstream(a / "results" / "tampered.json") << v.dump();
    CHECK(verify_file(a / "results" / "tampered.json").exit_code == kAssertionFailed);
    CHECK(verify_file(a / "results" / "nothing.json").exit_code == kInvalidConfig);
}

TEST_CASE("failed assertions exit 3 with outputs and the failing check named") {
    const auto out = scratch("assert");
    auto cfg = Json::parse(R"({"experiment": "percolation", "params": {"window_shape": [2000], "samples": 4,
        "kappa_abs_tolerance": 1e-12, "additivity": {"partitions_per_group": 1}}})");
    const auto r = run_json(cfg, out);
    CHECK(r.exit_code == kAssertionFailed);
    const auto v = Json::parse(slurp(out / "results" / "verification.json"));
    CHECK(v.at("passed") == false);
    const auto first = v.at("first_failure").get<std::string>();
    CHECK(r.message.find(first) != std::string::npos);
    bool kappa_failed = false;
    for (const auto& c : v.at("checks"))
        if (c.at("name") == "kappa_abs") kappa_failed = !c.at("passed").get<bool>();
    CHECK(kappa_failed);
    CHECK(verify_file(out / "results" / "verification.json").exit_code == kAssertionFailed);
}

TEST_CASE("resource caps exit 4 and write nothing") {
    const auto out = scratch("cap");
    auto cfg = Json::parse(R"({"experiment": "ids", "caps": {"max_matrix_size": 100}, "params": {"js": [200]}})");
    const auto r = run_json(cfg, out);
    CHECK(r.exit_code == kResourceCap);
    CHECK_FALSE(fs::exists(out));

    cfg = Json::parse(R"({"experiment": "ergodic", "caps": {"max_pattern_bits": 4}, "params": {"js": [100]}})");
    CHECK(run_json(cfg, out).exit_code == kResourceCap);
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("output directory precedence") {
    const auto base = scratch("precedence");
    auto cfg = kTile;
    cfg["output_dir"] = (base / "from_config").string();
    CHECK(run_json(cfg).results_dir == base / "from_config" / "results");
    ::setenv("AMENABLE_OUTPUT_DIR", (base / "from_env").string().c_str(), 1);
    CHECK(run_json(cfg).results_dir == base / "from_env" / "results");
    CHECK(run_json(cfg, base / "from_cli").results_dir == base / "from_cli" / "results");
    ::unsetenv("AMENABLE_OUTPUT_DIR");
    CHECK(fs::exists(base / "from_config" / "results" / "summary.json"));
    CHECK(fs::exists(base / "from_env" / "results" / "summary.json"));
    CHECK(fs::exists(base / "from_cli" / "results" / "summary.json"));
}
