#include <doctest.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "helpers.hpp"
#include "ziegler/cli.hpp"
#include "ziegler/json_io.hpp"

using namespace ziegler;
using nlohmann::json;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) {
        path = std::string("/tmp/ziegler_test_") + std::to_string(::getpid()) + "_" + name;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"ziegler"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli::run(static_cast<int>(argv.size()), argv.data());
}

void write_ziegler_config(const std::string& path, bool damped = false) {
    json j{{"link_count", 2},
           {"link_length", 1.0},
           {"masses", {2.0, 1.0}},
           {"stiffnesses", {1.0, 1.0}}};
    if (damped) j["dampings"] = {1.0, 1.0};
    std::ofstream out(path);
    out << j.dump(2);
}

}  // namespace

TEST_CASE("config round-trips through the documented schema") {
    const auto cfg = ztest::make2(2, 1, 1.5, 0.5, 1.2, 0.1, 0.2);
    const auto back = config_from_json(config_to_json(cfg));
    CHECK(back.link_count == cfg.link_count);
    CHECK(back.link_length == cfg.link_length);
    CHECK(back.masses == cfg.masses);
    CHECK(back.stiffnesses == cfg.stiffnesses);
    CHECK(back.dampings == cfg.dampings);
}

TEST_CASE("dampings default to zeros when omitted") {
    const auto cfg = config_from_json(json{{"link_count", 2},
                                           {"link_length", 1.0},
                                           {"masses", {2.0, 1.0}},
                                           {"stiffnesses", {1.0, 1.0}}});
    CHECK(cfg.undamped());
    CHECK(cfg.dampings == std::vector<double>{0.0, 0.0});
}

TEST_CASE("schema violations raise ConfigError") {
    CHECK_THROWS_AS(config_from_json(json::array()), ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"link_count", 2}, {"link_length", 1.0}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"link_count", 2},
                                          {"link_length", 1.0},
                                          {"masses", {1.0, "x"}},
                                          {"stiffnesses", {1.0, 1.0}}}),
                    ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"link_count", 2},
                                          {"link_length", 1.0},
                                          {"masses", {1.0}},
                                          {"stiffnesses", {1.0, 1.0}}}),
                    ConfigError);
}

TEST_CASE("sweep csv round-trips through the documented schema") {
    SweepSpec spec;
    spec.base = ztest::make2(1, 1, 1, 1);
    spec.alpha_grid = linspace(0.3, 1.2, 4);
    spec.load_cap = 8.0;
    SearchSettings s;
    s.scan_step = 0.05;
    const auto result = sweep_azimuth(spec, s);
    std::ostringstream out;
    write_sweep_csv(result, out);
    std::istringstream in(out.str());
    const auto rows = parse_sweep_csv(in);
    std::size_t want = 0;
    for (const auto& row : result.rows) want += row.boundaries.size();
    REQUIRE(rows.size() == want);
    std::size_t idx = 0;
    for (const auto& row : result.rows)
        for (std::size_t b = 0; b < row.boundaries.size(); ++b, ++idx) {
            CHECK(rows[idx].alpha == row.alpha);
            CHECK(rows[idx].boundary_index == static_cast<int>(b));
            CHECK(rows[idx].load == row.boundaries[b].load);
            CHECK(rows[idx].normalized == row.boundaries[b].normalized);
            CHECK(rows[idx].transition == to_string(row.boundaries[b].transition));
        }
}

TEST_CASE("cli classify reports flutter for the loaded classical design") {
    TempFile cfg("classify.json"), out("classify_out.json");
    write_ziegler_config(cfg.path);
    const int code =
        run_cli({"classify", "--config", cfg.path, "--load", "3.0", "--out", out.path});
    REQUIRE(code == 0);
    std::ifstream in(out.path);
    json j;
    in >> j;
    CHECK(j["class"] == "FLUTTER");
    CHECK(j["manifest"]["subcommand"] == "classify");
}

TEST_CASE("cli critical-load emits the classical value") {
    TempFile cfg("crit.json"), out("crit_out.json");
    write_ziegler_config(cfg.path);
    REQUIRE(run_cli({"critical-load", "--config", cfg.path, "--out", out.path}) == 0);
    std::ifstream in(out.path);
    json j;
    in >> j;
    CHECK(std::abs(j["numeric"]["p_normalized"].get<double>() - (3.5 - std::sqrt(2.0))) < 1e-9);
    CHECK(std::abs(j["closed_form"]["p_lower"].get<double>() - (3.5 - std::sqrt(2.0))) < 1e-12);
}

TEST_CASE("cli exit codes: bad schema is 2, missing file is 2") {
    TempFile bad("bad.json");
    {
        std::ofstream out(bad.path);
        out << "{\"link_count\": 2}";
    }
    CHECK(run_cli({"classify", "--config", bad.path, "--load", "1.0"}) == 2);
    CHECK(run_cli({"classify", "--config", "/nonexistent.json", "--load", "1.0"}) == 2);
}

TEST_CASE("cli sweep writes byte-identical csv across runs plus a manifest sidecar") {
    TempFile cfg("sweep.json"), out1("s1.csv"), out2("s2.csv");
    write_ziegler_config(cfg.path);
    const std::vector<std::string> common{"sweep",        "--config",    cfg.path,
                                          "--plane",      "1,2",         "--alpha-steps",
                                          "9",            "--alpha-min", "0.3",
                                          "--alpha-max",  "1.2",         "--load-cap",
                                          "8",            "--scan-step", "0.05"};
    auto with_out = [&](const std::string& path) {
        auto v = common;
        v.push_back("--out");
        v.push_back(path);
        return v;
    };
    REQUIRE(run_cli(with_out(out1.path)) == 0);
    REQUIRE(run_cli(with_out(out2.path)) == 0);
    std::ifstream a(out1.path), b(out2.path);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK(!sa.str().empty());

    std::ifstream mf(out1.path + ".manifest.json");
    REQUIRE(mf.good());
    json manifest;
    mf >> manifest;
    CHECK(manifest["subcommand"] == "sweep");
    CHECK(manifest["tool_version"].is_string());
    CHECK(manifest.contains("wall_time_ms"));
    std::remove((out1.path + ".manifest.json").c_str());
    std::remove((out2.path + ".manifest.json").c_str());
}

TEST_CASE("report serialization covers the closed-form and numeric paths") {
    const auto rep = classify(ztest::make2(2, 1, 1, 1, 1, 1, 1), 1.0);
    const json j = to_json(rep);
    CHECK(j["class"] == "ASYMPTOTICALLY_STABLE");
    CHECK(j["spectrum_variable"] == "lambda");
    CHECK(j["hurwitz_minors"].size() == 4);

    CriticalLoad cl;
    cl.value = std::numeric_limits<double>::infinity();
    cl.normalized = cl.value;
    cl.transition = Transition::UNBOUNDED;
    CHECK(to_json(cl)["P"] == "inf");
}
