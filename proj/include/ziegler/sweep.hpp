#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ziegler/critload.hpp"

namespace ziegler {

/// Azimuth-parametrized mass-plane sweep: masses[plane_i-1] = r cos(alpha),
/// masses[plane_j-1] = r sin(alpha) over an increasing alpha grid in
/// [0, pi/2]. Endpoints put one mass exactly at zero; those rows run on
/// the deflated polynomials rather than a small-epsilon fudge.
struct SweepSpec {
    PendulumConfig base;
    int plane_i = 1;  ///< 1-based mass index swept as r cos(alpha)
    int plane_j = 2;  ///< 1-based mass index swept as r sin(alpha)
    double r = 1.0;
    std::vector<double> alpha_grid;
    double load_cap = 25.0;  ///< normalized; the diagrams live well below this
};

struct BoundaryPoint {
    double load = 0.0;        ///< raw P
    double normalized = 0.0;  ///< P*l/c_m
    Transition transition = Transition::OTHER;
    double omega = 0.0;
};

struct SweepRow {
    double alpha = 0.0;
    std::vector<BoundaryPoint> boundaries;  ///< strictly increasing loads
    std::vector<StabilityClass> bands;      ///< boundaries.size()+1 classes
    std::string error;                      ///< non-fatal per-row failure
};

struct SweepResult {
    SweepSpec spec;
    SearchSettings settings;
    std::vector<SweepRow> rows;
};

/// Config of the sweep family at a given azimuth.
PendulumConfig config_at_alpha(const SweepSpec& spec, double alpha);

/// All classification-change loads of one configuration in
/// (0, load_cap * c_m / l], by scan plus bisection per flip.
SweepRow boundary_row(const PendulumConfig& cfg, double alpha, double load_cap,
                      const SearchSettings& s);

/// Runs the rows of the grid (optionally on several threads); rows are
/// independent, so the result is identical to serial execution.
SweepResult sweep_azimuth(const SweepSpec& spec, const SearchSettings& s, int jobs = 1);

/// Uniform grid helper, endpoints included.
std::vector<double> linspace(double lo, double hi, int n);

/// Rectangular raster of stability classes over (alpha or r) x load.
struct GridSpec {
    PendulumConfig base;
    int plane_i = 1;
    int plane_j = 2;
    bool axis_is_alpha = true;   ///< false: axis sweeps r at fixed alpha
    double fixed = 1.0;          ///< the non-swept coordinate (r or alpha)
    double axis_min = 0.0, axis_max = 1.5707963267948966;
    int axis_steps = 100;
    double load_min = 0.0, load_max = 25.0;  ///< normalized loads
    int load_steps = 100;
};

struct GridResult {
    GridSpec spec;
    std::vector<StabilityClass> cells;  ///< row-major: axis index major
    std::vector<std::string> errors;    ///< per-axis-row, empty when fine
};

GridResult classify_grid(const GridSpec& spec, const ToleranceSet& tol = {}, int jobs = 1);

/// CSV emission with a fixed column schema
/// (alpha,r,boundary_index,load_P,load_p_normalized,transition,omega);
/// numbers are printed with %.17g so reruns are byte-stable.
void write_sweep_csv(const SweepResult& result, std::ostream& out);
void write_grid_csv(const GridResult& result, std::ostream& out);

}  // namespace ziegler
