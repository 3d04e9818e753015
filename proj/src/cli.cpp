#include "ziegler/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include "ziegler/json_io.hpp"
#include "ziegler/verify.hpp"
#include "ziegler/version.hpp"

namespace ziegler::cli {

namespace {

using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;
constexpr double kPi2 = 1.5707963267948966;

int default_jobs() {
    if (const char* env = std::getenv("ZIEGLER_JOBS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

struct Manifest {
    std::string subcommand;
    std::string config_path;
    json overrides = json::object();
    std::vector<std::string> outputs;
    std::uint64_t seed = 0;
    double wall_time_ms = 0.0;

    json embedded() const {  // without wall time, so reruns stay byte-identical
        return json{{"tool_version", kVersion}, {"subcommand", subcommand},
                    {"config", config_path},    {"overrides", overrides},
                    {"outputs", outputs},       {"seed", seed}};
    }
    json sidecar() const {
        json j = embedded();
        j["wall_time_ms"] = wall_time_ms;
        return j;
    }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open " + path + " for writing");
    out << text;
    if (!out) throw std::ios_base::failure("failed writing " + path);
}

// JSON result to --out or stdout, with the manifest embedded.
void emit_json(json payload, Manifest& manifest, const std::string& out_path) {
    payload["manifest"] = manifest.embedded();
    const std::string text = payload.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        manifest.outputs.push_back(out_path);
        write_text(out_path, text);
        write_text(out_path + ".manifest.json", manifest.sidecar().dump(2) + "\n");
    }
}

void emit_csv(const std::string& text, Manifest& manifest, const std::string& out_path) {
    manifest.outputs.push_back(out_path);
    write_text(out_path, text);
    write_text(out_path + ".manifest.json", manifest.sidecar().dump(2) + "\n");
}

void add_tolerance_flags(CLI::App* cmd, ToleranceSet& tol) {
    cmd->add_option("--boundary-band", tol.boundary_band,
                    "relative width of the BOUNDARY classification band")
        ->capture_default_str();
    cmd->add_option("--imag-tol", tol.imag_axis, "relative real-axis tolerance for roots")
        ->capture_default_str();
    cmd->add_option("--deflation-tol", tol.deflation,
                    "relative threshold deflating vanishing leading coefficients")
        ->capture_default_str();
    cmd->add_option("--cluster-radius", tol.cluster_radius,
                    "relative radius for root multiplicity clusters")
        ->capture_default_str();
}

void add_search_flags(CLI::App* cmd, SearchSettings& s) {
    cmd->add_option("--p-max", s.p_max, "normalized search cap")->capture_default_str();
    cmd->add_option("--scan-step", s.scan_step, "normalized coarse scan step")
        ->capture_default_str();
    cmd->add_option("--bisect-tol", s.bisect_tol, "normalized bisection tolerance")
        ->capture_default_str();
    add_tolerance_flags(cmd, s.tol);
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Stability analysis and mass-distribution optimization of "
                 "m-link follower-load pendulums"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    int jobs = default_jobs();
    app.add_option("--jobs", jobs, "worker threads for sweeps and multi-start searches")
        ->capture_default_str();

    std::string config_path, out_path, json_path;

    // classify
    auto* c_classify = app.add_subcommand("classify", "stability class at one load");
    double load = 0.0;
    ToleranceSet classify_tol;
    c_classify->add_option("--config", config_path, "pendulum config JSON")->required();
    c_classify->add_option("--load", load, "raw follower load P")->required();
    c_classify->add_option("--out", out_path, "output JSON path (default: stdout)");
    add_tolerance_flags(c_classify, classify_tol);

    // critical-load
    auto* c_crit = app.add_subcommand("critical-load", "first load leaving the stable class");
    SearchSettings crit_settings;
    double beta = -1.0;
    c_crit->add_option("--config", config_path, "pendulum config JSON")->required();
    c_crit->add_option("--out", out_path, "output JSON path (default: stdout)");
    c_crit->add_option("--beta", beta,
                       "also evaluate the vanishing-damping limit along d1 = beta d2 (m=2)");
    add_search_flags(c_crit, crit_settings);

    // sweep
    auto* c_sweep = app.add_subcommand("sweep", "azimuth sweep of boundary loads (CSV)");
    SearchSettings sweep_settings;
    std::pair<int, int> plane{1, 2};
    double radius = 1.0, alpha_min = 0.0, alpha_max = kPi2, load_cap = 25.0;
    int alpha_steps = 100;
    c_sweep->add_option("--config", config_path, "pendulum config JSON")->required();
    c_sweep->add_option("--plane", plane, "swept mass indices i,j (1-based)")
        ->capture_default_str();
    c_sweep->add_option("--r", radius, "radial distance in the mass plane")
        ->capture_default_str();
    c_sweep->add_option("--alpha-steps", alpha_steps, "azimuth grid size")->capture_default_str();
    c_sweep->add_option("--alpha-min", alpha_min, "first azimuth")->capture_default_str();
    c_sweep->add_option("--alpha-max", alpha_max, "last azimuth")->capture_default_str();
    c_sweep->add_option("--load-cap", load_cap, "normalized load cap for boundary scans")
        ->capture_default_str();
    c_sweep->add_option("--out", out_path, "output CSV path")->required();
    c_sweep->add_option("--json", json_path, "optional JSON mirror path");
    add_search_flags(c_sweep, sweep_settings);

    // grid
    auto* c_grid = app.add_subcommand("grid", "stability-class raster (CSV)");
    ToleranceSet grid_tol;
    GridSpec grid_spec;
    std::string grid_axis = "alpha";
    std::pair<int, int> grid_plane{1, 2};
    c_grid->add_option("--config", config_path, "pendulum config JSON")->required();
    c_grid->add_option("--plane", grid_plane, "mass plane indices i,j")->capture_default_str();
    c_grid->add_option("--axis", grid_axis, "swept axis: alpha or r")
        ->check(CLI::IsMember({"alpha", "r"}))
        ->capture_default_str();
    c_grid->add_option("--fixed", grid_spec.fixed, "the non-swept coordinate (r or alpha)")
        ->capture_default_str();
    c_grid->add_option("--axis-min", grid_spec.axis_min, "axis start")->capture_default_str();
    c_grid->add_option("--axis-max", grid_spec.axis_max, "axis end")->capture_default_str();
    c_grid->add_option("--axis-steps", grid_spec.axis_steps, "axis resolution")
        ->capture_default_str();
    c_grid->add_option("--load-min", grid_spec.load_min, "normalized load start")
        ->capture_default_str();
    c_grid->add_option("--load-max", grid_spec.load_max, "normalized load end")
        ->capture_default_str();
    c_grid->add_option("--load-steps", grid_spec.load_steps, "load resolution")
        ->capture_default_str();
    c_grid->add_option("--out", out_path, "output CSV path")->required();
    c_grid->add_option("--json", json_path, "optional JSON mirror path");
    add_tolerance_flags(c_grid, grid_tol);

    // singular
    auto* c_sing = app.add_subcommand("singular", "locate and certify singular boundary points");
    SearchSettings sing_settings;
    std::pair<int, int> sing_plane{1, 2};
    double sing_r = 1.0;
    std::vector<double> cusp_guess;
    int cusp_scan = 0, vt_steps = 0;
    bool umbrella = false;
    double certify_tol = 1e-9;
    c_sing->add_option("--config", config_path, "pendulum config JSON")->required();
    c_sing->add_option("--plane", sing_plane, "family mass plane i,j")->capture_default_str();
    c_sing->add_option("--r", sing_r, "family radial distance")->capture_default_str();
    c_sing->add_option("--cusp-guess", cusp_guess,
                       "Newton start alpha,P,mu for a triple-eigenvalue cusp")
        ->expected(3);
    c_sing->add_option("--cusp-scan", cusp_scan, "multi-start cusp search with N azimuth seeds");
    c_sing->add_option("--vertical-tangent", vt_steps,
                       "sweep N azimuth rows and report vertical tangents");
    c_sing->add_flag("--umbrella", umbrella, "certify the two-link surface apex");
    c_sing->add_option("--tol", certify_tol, "certification residual tolerance")
        ->capture_default_str();
    c_sing->add_option("--out", out_path, "output JSON path (default: stdout)");
    add_search_flags(c_sing, sing_settings);

    // optimize
    auto* c_opt = app.add_subcommand("optimize", "extremize the critical load over masses");
    SearchSettings opt_settings;
    opt_settings.p_max = 100.0;
    opt_settings.scan_step = 0.05;
    std::string sense_str = "max";
    int starts = 32;
    std::uint64_t seed = 0;
    std::pair<double, double> bounds{0.0, 10.0};
    std::pair<int, int> opt_plane{0, 0};
    double opt_r = 1.0;
    c_opt->add_option("--config", config_path, "pendulum config JSON")->required();
    c_opt->add_option("--sense", sense_str, "min or max")
        ->check(CLI::IsMember({"min", "max"}))
        ->capture_default_str();
    c_opt->add_option("--starts", starts, "multi-start count")->capture_default_str();
    c_opt->add_option("--seed", seed, "start-placement seed")->capture_default_str();
    c_opt->add_option("--bounds", bounds, "per-mass bounds lo,hi")->capture_default_str();
    c_opt->add_option("--plane", opt_plane,
                      "restrict to the azimuth circle of masses i,j (1-based)");
    c_opt->add_option("--r", opt_r, "azimuth circle radius")->capture_default_str();
    c_opt->add_option("--out", out_path, "output JSON path (default: stdout)");
    add_search_flags(c_opt, opt_settings);

    // verify
    auto* c_verify = app.add_subcommand("verify", "run the closed-form cross-check suite");
    std::string golden_dir;
    bool update_golden = false;
    c_verify->add_option("--golden-dir", golden_dir, "directory with golden files");
    c_verify->add_flag("--update-golden", update_golden, "rewrite golden files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    Manifest manifest;
    manifest.config_path = config_path;
    manifest.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    auto finish_time = [&] {
        manifest.wall_time_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
    };

    try {
        if (app.got_subcommand(c_classify)) {
            manifest.subcommand = "classify";
            manifest.overrides = {{"load", load}};
            const auto cfg = load_config(config_path);
            const auto rep = classify(cfg, load, classify_tol);
            finish_time();
            emit_json(to_json(rep), manifest, out_path);
        } else if (app.got_subcommand(c_crit)) {
            manifest.subcommand = "critical-load";
            manifest.overrides = {{"p_max", crit_settings.p_max},
                                  {"scan_step", crit_settings.scan_step},
                                  {"bisect_tol", crit_settings.bisect_tol}};
            const auto cfg = load_config(config_path);
            json payload{{"numeric", to_json(critical_load_numeric(cfg, crit_settings))}};
            if (cfg.link_count == 2) {
                if (cfg.undamped()) {
                    try {
                        const auto closed = undamped_critical_loads_m2(cfg);
                        payload["closed_form"] = {{"p_lower", closed.p_lower},
                                                  {"p_upper", closed.p_upper}};
                    } catch (const InfiniteLoad&) {
                        payload["closed_form"] = {{"p_lower", "inf"}, {"p_upper", "inf"}};
                    }
                } else {
                    payload["closed_form"] = {{"P", damped_critical_load_m2(cfg)}};
                }
                if (beta >= 0.0)
                    payload["zero_damping_limit"] = {{"beta", beta},
                                                     {"P", zero_damping_limit_m2(cfg, beta)}};
            }
            finish_time();
            emit_json(payload, manifest, out_path);
        } else if (app.got_subcommand(c_sweep)) {
            manifest.subcommand = "sweep";
            manifest.overrides = {{"plane", {plane.first, plane.second}},
                                  {"r", radius},
                                  {"alpha_steps", alpha_steps},
                                  {"alpha_range", {alpha_min, alpha_max}},
                                  {"load_cap", load_cap},
                                  {"scan_step", sweep_settings.scan_step}};
            SweepSpec spec;
            spec.base = load_config(config_path);
            spec.plane_i = plane.first;
            spec.plane_j = plane.second;
            spec.r = radius;
            spec.load_cap = load_cap;
            spec.alpha_grid = linspace(alpha_min, alpha_max, alpha_steps);
            const auto result = sweep_azimuth(spec, sweep_settings, jobs);
            std::ostringstream csv;
            write_sweep_csv(result, csv);
            finish_time();
            emit_csv(csv.str(), manifest, out_path);
            if (!json_path.empty()) emit_json(to_json(result), manifest, json_path);
        } else if (app.got_subcommand(c_grid)) {
            manifest.subcommand = "grid";
            grid_spec.base = load_config(config_path);
            grid_spec.plane_i = grid_plane.first;
            grid_spec.plane_j = grid_plane.second;
            grid_spec.axis_is_alpha = grid_axis == "alpha";
            manifest.overrides = {{"axis", grid_axis},
                                  {"axis_steps", grid_spec.axis_steps},
                                  {"load_steps", grid_spec.load_steps}};
            const auto result = classify_grid(grid_spec, grid_tol, jobs);
            std::ostringstream csv;
            write_grid_csv(result, csv);
            finish_time();
            emit_csv(csv.str(), manifest, out_path);
            if (!json_path.empty()) emit_json(to_json(result), manifest, json_path);
        } else if (app.got_subcommand(c_sing)) {
            manifest.subcommand = "singular";
            manifest.overrides = {{"plane", {sing_plane.first, sing_plane.second}},
                                  {"r", sing_r},
                                  {"tol", certify_tol}};
            const auto cfg = load_config(config_path);
            SweepSpec family;
            family.base = cfg;
            family.plane_i = sing_plane.first;
            family.plane_j = sing_plane.second;
            family.r = sing_r;
            json points = json::array();
            if (!cusp_guess.empty())
                points.push_back(to_json(find_triple_root_cusp(
                    family, {cusp_guess[0], cusp_guess[1], cusp_guess[2]}, certify_tol)));
            if (cusp_scan > 0)
                for (const auto& pt : find_cusps_multistart(family, cusp_scan, certify_tol))
                    points.push_back(to_json(pt));
            if (vt_steps > 0) {
                family.alpha_grid = linspace(0.0, kPi2, vt_steps);
                const auto sweep = sweep_azimuth(family, sing_settings, jobs);
                for (const auto& pt : find_vertical_tangent(sweep)) points.push_back(to_json(pt));
            }
            if (umbrella) {
                if (cfg.link_count != 2)
                    throw std::invalid_argument("--umbrella requires a two-link config");
                points.push_back(to_json(certify_umbrella_apex_m2(
                    cfg.stiffnesses[0], cfg.stiffnesses[1], cfg.link_length)));
            }
            finish_time();
            emit_json(json{{"singular_points", points}}, manifest, out_path);
        } else if (app.got_subcommand(c_opt)) {
            manifest.subcommand = "optimize";
            manifest.overrides = {{"sense", sense_str},
                                  {"starts", starts},
                                  {"bounds", {bounds.first, bounds.second}},
                                  {"p_max", opt_settings.p_max}};
            const auto cfg = load_config(config_path);
            const Sense sense = sense_str == "min" ? Sense::MIN : Sense::MAX;
            std::vector<ExtremumReport> reports;
            if (opt_plane.first > 0 && opt_plane.second > 0) {
                manifest.overrides["plane"] = {opt_plane.first, opt_plane.second};
                manifest.overrides["r"] = opt_r;
                reports = optimize_azimuth(cfg, opt_plane.first, opt_plane.second, opt_r, sense,
                                           starts, opt_settings, jobs);
            } else {
                std::vector<MassBounds> box(cfg.link_count, {bounds.first, bounds.second});
                reports = optimize_masses(cfg, box, sense, starts, opt_settings, seed, jobs);
            }
            json out = json::array();
            for (const auto& rep : reports) out.push_back(to_json(rep));
            finish_time();
            emit_json(json{{"extrema", out}}, manifest, out_path);
        } else if (app.got_subcommand(c_verify)) {
            verify::VerifyOptions vo;
            vo.golden_dir = golden_dir;
            vo.update_golden = update_golden;
            vo.jobs = jobs;
            const int failures = verify::print_results(verify::run_acceptance(vo));
            return failures == 0 ? 0 : kExitNumeric;
        }
    } catch (const ConfigError& e) {
        std::cerr << json{{"error", "config"}, {"message", e.what()}}.dump() << "\n";
        return kExitConfig;
    } catch (const std::ios_base::failure& e) {
        std::cerr << json{{"error", "io"}, {"message", e.what()}}.dump() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "numeric"}, {"message", e.what()}}.dump() << "\n";
        return kExitNumeric;
    }
    return 0;
}

}  // namespace ziegler::cli
