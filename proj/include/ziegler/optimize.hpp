#pragma once

#include <cstdint>
#include <optional>

#include "ziegler/singular.hpp"

namespace ziegler {

enum class Sense { MIN, MAX };
enum class ExtremumKind {
    INTERIOR_SMOOTH,
    BOUNDARY_MASS_ZERO,
    SINGULAR_CUSP,
    UNBOUNDED_DIRECTION,
};

const char* to_string(Sense s);
const char* to_string(ExtremumKind k);

struct ExtremumCertificate {
    double gradient_norm = -1.0;            ///< probed for interior extrema
    std::vector<int> active_lower_bounds;   ///< 1-based mass indices pinned at 0
    std::vector<double> ray_probe_values;   ///< objectives along an unbounded ray
    std::optional<SingularPoint> cusp;      ///< cross-certification when applicable
    std::string note;
};

struct ExtremumReport {
    std::vector<double> masses;
    double objective = 0.0;  ///< normalized critical load p; +inf if unbounded
    bool unbounded = false;
    std::vector<double> ascent_direction;  ///< set for UNBOUNDED_DIRECTION
    Sense sense = Sense::MIN;
    ExtremumKind kind = ExtremumKind::INTERIOR_SMOOTH;
    ExtremumCertificate certificate;
    // family coordinates when produced by the azimuth-constrained search
    std::optional<int> plane_i, plane_j;
    std::optional<double> r, alpha;
};

struct MassBounds {
    double lo = 0.0;
    double hi = 10.0;
};

/// Multi-start derivative-free (simplex) search of the mass box for
/// extrema of the normalized critical load. Starts are low-discrepancy,
/// deterministic for a fixed seed; duplicates merge by mass-direction and
/// objective. The objective is evaluated through critical_load_numeric;
/// when it exceeds the cap along a ray whose limiting masses vanish, an
/// UNBOUNDED_DIRECTION report is produced instead of a fake optimum.
std::vector<ExtremumReport> optimize_masses(const PendulumConfig& base,
                                            const std::vector<MassBounds>& bounds, Sense sense,
                                            int starts, const SearchSettings& s,
                                            std::uint64_t seed = 0, int jobs = 1);

/// Same search constrained to the azimuth circle masses[i-1] = r cos a,
/// masses[j-1] = r sin a (the paper-style one-parameter families).
std::vector<ExtremumReport> optimize_azimuth(const PendulumConfig& base, int plane_i, int plane_j,
                                             double r, Sense sense, int starts,
                                             const SearchSettings& s, int jobs = 1);

/// Refines the report kind by probing: active bounds, near-triple
/// eigenvalue coalescence (cross-certified through the cusp solver when
/// family coordinates are known), or a smooth interior gradient.
ExtremumReport classify_extremum(ExtremumReport report, const PendulumConfig& base,
                                 const SearchSettings& s);

}  // namespace ziegler
