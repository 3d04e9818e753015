#pragma once

#include <optional>

#include "ziegler/stability.hpp"

namespace ziegler {

enum class Transition {
    FLUTTER_ONSET,          ///< stable -> flutter (imaginary pair coalesces)
    FLUTTER_TO_DIVERGENCE,  ///< flutter -> static instability
    DIVERGENCE_ONSET,       ///< stable -> static instability
    RESTABILIZATION,        ///< back into a stable class
    UNBOUNDED,              ///< no transition below the search cap
    OTHER,
};

const char* to_string(Transition t);

struct CriticalLoad {
    double value = 0.0;       ///< raw P*, +inf when UNBOUNDED
    double normalized = 0.0;  ///< p* = P* * l / c_m
    Transition transition = Transition::UNBOUNDED;
    std::optional<double> critical_frequency;  ///< |Im lambda| of the merging pair
};

struct SearchSettings {
    double p_max = 1e3;        ///< normalized search cap
    double scan_step = 0.01;   ///< normalized coarse step
    double bisect_tol = 1e-10; ///< normalized bisection width
    ToleranceSet tol{};
};

/// Both closed-form boundary loads of the undamped two-link pendulum,
/// normalized: p = 2 + (sqrt(m1/m2) -/+ sqrt(c1/c2))^2 / 2. The lower
/// branch is flutter onset, the upper the flutter/divergence transition;
/// p_lower >= 2 always. Throws InfiniteLoad when the free-end mass is 0.
struct ClosedFormLoadsM2 {
    double p_lower = 0.0;
    double p_upper = 0.0;
};
ClosedFormLoadsM2 undamped_critical_loads_m2(const PendulumConfig& cfg);

/// Routh-Hurwitz closed form for the damped two-link pendulum (raw P).
/// Throws DegenerateDamping when a denominator factor vanishes.
double damped_critical_load_m2(const PendulumConfig& cfg);

/// Limit of the damped closed form along d1 = beta*d2 as d2 -> 0 (raw P).
/// Strictly below the undamped flutter onset: the vanishing-damping gap.
double zero_damping_limit_m2(const PendulumConfig& cfg, double beta);

/// Numeric critical load for any m: coarse scan of the classification in
/// P followed by bisection of the first flip out of the stable class.
/// The bisection uses strict sign decisions (no boundary band), so the
/// result is sharp to bisect_tol. UNBOUNDED is a first-class result.
/// Throws UnstableAtZeroLoad when the configuration is not strictly
/// stable at P = 0.
CriticalLoad critical_load_numeric(const PendulumConfig& cfg, const SearchSettings& s = {});

/// Transition label for a classification flip, refined for damped flips
/// by inspecting the crossing eigenvalue in `to`.
Transition transition_between(const StabilityReport& from, const StabilityReport& to,
                              const ToleranceSet& tol);

/// |Im lambda| of the pair responsible for a boundary crossing, taken
/// from the unstable-side report. Zero for static transitions.
double merging_frequency(const StabilityReport& unstable_side, Transition t,
                         const ToleranceSet& tol);

}  // namespace ziegler
