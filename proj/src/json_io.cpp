#include "ziegler/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "ziegler/errors.hpp"

namespace ziegler {

namespace {

using nlohmann::json;

std::vector<double> number_list(const json& j, const char* key, bool required) {
    if (!j.contains(key)) {
        if (required) throw ConfigError(std::string("config: missing field ") + key);
        return {};
    }
    if (!j[key].is_array()) throw ConfigError(std::string("config: ") + key + " must be an array");
    std::vector<double> out;
    for (const auto& v : j[key]) {
        if (!v.is_number()) throw ConfigError(std::string("config: ") + key + " must be numeric");
        out.push_back(v.get<double>());
    }
    return out;
}

json finite_or_string(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    return v;
}

}  // namespace

PendulumConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config: document must be a JSON object");
    PendulumConfig cfg;
    if (!j.contains("link_count") || !j["link_count"].is_number_integer())
        throw ConfigError("config: link_count must be an integer");
    cfg.link_count = j["link_count"].get<int>();
    if (!j.contains("link_length") || !j["link_length"].is_number())
        throw ConfigError("config: link_length must be a number");
    cfg.link_length = j["link_length"].get<double>();
    cfg.masses = number_list(j, "masses", true);
    cfg.stiffnesses = number_list(j, "stiffnesses", true);
    cfg.dampings = number_list(j, "dampings", false);
    if (cfg.dampings.empty()) cfg.dampings.assign(cfg.masses.size(), 0.0);
    validate(cfg);
    return cfg;
}

json config_to_json(const PendulumConfig& cfg) {
    return json{{"link_count", cfg.link_count},
                {"link_length", cfg.link_length},
                {"masses", cfg.masses},
                {"stiffnesses", cfg.stiffnesses},
                {"dampings", cfg.dampings}};
}

PendulumConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: parse error: ") + e.what());
    }
    return config_from_json(j);
}

json to_json(const Spectrum& s) {
    json roots = json::array();
    for (std::size_t i = 0; i < s.roots.size(); ++i)
        roots.push_back({{"re", s.roots[i].real()},
                         {"im", s.roots[i].imag()},
                         {"multiplicity", s.multiplicity[i]}});
    return json{{"roots", roots}, {"infinite_count", s.infinite_count}};
}

json to_json(const StabilityReport& r) {
    json j{{"class", to_string(r.cls)},
           {"spectrum_variable", r.spectrum_in_mu ? "mu" : "lambda"},
           {"spectrum", to_json(r.spectrum)},
           {"boundary_distance", finite_or_string(r.boundary_distance)},
           {"infinite_count", r.infinite_count}};
    if (!r.discriminants.empty()) j["discriminants"] = r.discriminants;
    if (!r.hurwitz_minors.empty()) j["hurwitz_minors"] = r.hurwitz_minors;
    return j;
}

json to_json(const CriticalLoad& c) {
    json j{{"P", finite_or_string(c.value)},
           {"p_normalized", finite_or_string(c.normalized)},
           {"transition", to_string(c.transition)}};
    if (c.critical_frequency) j["critical_frequency"] = *c.critical_frequency;
    return j;
}

json to_json(const SweepResult& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        json b = json::array();
        for (const auto& pt : row.boundaries)
            b.push_back({{"P", pt.load},
                         {"p_normalized", pt.normalized},
                         {"transition", to_string(pt.transition)},
                         {"omega", pt.omega}});
        json bands = json::array();
        for (auto cls : row.bands) bands.push_back(to_string(cls));
        json jr{{"alpha", row.alpha}, {"boundaries", b}, {"bands", bands}};
        if (!row.error.empty()) jr["error"] = row.error;
        rows.push_back(jr);
    }
    return json{{"spec",
                 {{"base", config_to_json(r.spec.base)},
                  {"plane", {r.spec.plane_i, r.spec.plane_j}},
                  {"r", r.spec.r},
                  {"load_cap", r.spec.load_cap},
                  {"alpha_count", r.spec.alpha_grid.size()}}},
                {"settings",
                 {{"p_max", r.settings.p_max},
                  {"scan_step", r.settings.scan_step},
                  {"bisect_tol", r.settings.bisect_tol}}},
                {"rows", rows}};
}

json to_json(const GridResult& r) {
    json classes = json::array();
    for (auto cls : r.cells) classes.push_back(to_string(cls));
    return json{{"spec",
                 {{"base", config_to_json(r.spec.base)},
                  {"plane", {r.spec.plane_i, r.spec.plane_j}},
                  {"axis", r.spec.axis_is_alpha ? "alpha" : "r"},
                  {"fixed", r.spec.fixed},
                  {"axis_range", {r.spec.axis_min, r.spec.axis_max}},
                  {"axis_steps", r.spec.axis_steps},
                  {"load_range", {r.spec.load_min, r.spec.load_max}},
                  {"load_steps", r.spec.load_steps}}},
                {"cells", classes}};
}

json to_json(const SingularPoint& p) {
    json j{{"kind", to_string(p.kind)},
           {"location",
            {{"masses", p.masses}, {"P", p.load}}},
           {"mu", {{"re", p.mu.real()}, {"im", p.mu.imag()}}},
           {"lambda", {{"re", p.lambda.real()}, {"im", p.lambda.imag()}}},
           {"jordan_order", p.jordan_order},
           {"residuals", p.residuals}};
    if (p.alpha) j["location"]["alpha"] = *p.alpha;
    if (p.r) j["location"]["r"] = *p.r;
    return j;
}

json to_json(const ExtremumReport& r) {
    json cert = json::object();
    if (r.certificate.gradient_norm >= 0.0) cert["gradient_norm"] = r.certificate.gradient_norm;
    if (!r.certificate.active_lower_bounds.empty())
        cert["active_lower_bounds"] = r.certificate.active_lower_bounds;
    if (!r.certificate.ray_probe_values.empty()) {
        json probes = json::array();
        for (double v : r.certificate.ray_probe_values) probes.push_back(finite_or_string(v));
        cert["ray_probe_values"] = probes;
    }
    if (r.certificate.cusp) cert["cusp"] = to_json(*r.certificate.cusp);
    if (!r.certificate.note.empty()) cert["note"] = r.certificate.note;

    json j{{"masses", r.masses},
           {"objective", finite_or_string(r.objective)},
           {"sense", to_string(r.sense)},
           {"kind", to_string(r.kind)},
           {"certificate", cert}};
    if (r.unbounded) j["ascent_direction"] = r.ascent_direction;
    if (r.alpha) j["alpha"] = *r.alpha;
    if (r.r) j["r"] = *r.r;
    return j;
}

std::vector<SweepCsvRow> parse_sweep_csv(std::istream& in) {
    std::vector<SweepCsvRow> rows;
    std::string line;
    if (!std::getline(in, line)) return rows;
    if (line != "alpha,r,boundary_index,load_P,load_p_normalized,transition,omega")
        throw std::runtime_error("sweep csv: unexpected header: " + line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        SweepCsvRow row{};
        std::getline(ss, field, ',');
        row.alpha = std::stod(field);
        std::getline(ss, field, ',');
        row.r = std::stod(field);
        std::getline(ss, field, ',');
        row.boundary_index = std::stoi(field);
        std::getline(ss, field, ',');
        row.load = std::stod(field);
        std::getline(ss, field, ',');
        row.normalized = std::stod(field);
        std::getline(ss, row.transition, ',');
        std::getline(ss, field, ',');
        row.omega = std::stod(field);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace ziegler
