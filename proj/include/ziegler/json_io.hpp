#pragma once

#include <json.hpp>
#include <string>

#include "ziegler/optimize.hpp"

namespace ziegler {

/// Config document: {"link_count": int, "link_length": num, "masses": [..],
/// "stiffnesses": [..], "dampings": [..]}; dampings may be omitted and
/// defaults to zeros. Throws ConfigError on schema violations.
PendulumConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const PendulumConfig& cfg);
PendulumConfig load_config(const std::string& path);

nlohmann::json to_json(const Spectrum& s);
nlohmann::json to_json(const StabilityReport& r);
nlohmann::json to_json(const CriticalLoad& c);
nlohmann::json to_json(const SweepResult& r);
nlohmann::json to_json(const GridResult& r);
nlohmann::json to_json(const SingularPoint& p);
nlohmann::json to_json(const ExtremumReport& r);

/// Parses the sweep CSV emitted by write_sweep_csv back into row records
/// (used by round-trip checks and downstream tooling).
struct SweepCsvRow {
    double alpha, r;
    int boundary_index;
    double load, normalized;
    std::string transition;
    double omega;
};
std::vector<SweepCsvRow> parse_sweep_csv(std::istream& in);

}  // namespace ziegler
