#pragma once

#include <Eigen/Core>
#include <vector>

#include "ziegler/charpoly.hpp"
#include "ziegler/model.hpp"
#include "ziegler/tolerances.hpp"

namespace ziegler {

enum class StabilityClass {
    MARGINALLY_STABLE,      ///< undamped: all mu real, simple, negative
    FLUTTER,                ///< undamped: some mu off the real axis
    DIVERGENCE,             ///< undamped: real positive mu, none off-axis
    FLUTTER_AND_DIVERGENCE, ///< undamped: both mechanisms present
    BOUNDARY,               ///< a deciding quantity sits inside the band
    ASYMPTOTICALLY_STABLE,  ///< damped: all Hurwitz minors positive
    UNSTABLE_DAMPED,        ///< damped: some Hurwitz minor non-positive
};

const char* to_string(StabilityClass c);

struct StabilityReport {
    StabilityClass cls = StabilityClass::BOUNDARY;
    Spectrum spectrum;            ///< mu roots (undamped) or lambda roots (damped)
    bool spectrum_in_mu = false;
    std::vector<double> discriminants;   ///< undamped: Delta_1..Delta_m (nominal)
    std::vector<double> hurwitz_minors;  ///< damped: leading principal minors
    double boundary_distance = 0.0;      ///< smallest normalized deciding margin
    int infinite_count = 0;
};

/// 2m x 2m matrix interleaving the polynomial and its derivative with
/// progressive right shifts; the even-order leading principal minors form
/// the discriminant sequence.
struct DiscriminationMatrix {
    Eigen::MatrixXd entries;
};

DiscriminationMatrix discrimination_matrix(const MuPoly& p);

/// Delta_k = det of the leading principal minor of order 2k, k = 1..m.
std::vector<double> discriminant_sequence(const MuPoly& p);

/// Root-based classification of the undamped (mu) polynomial, with the
/// discriminant sequence attached as an independent witness. BOUNDARY is
/// reported when the smallest deciding margin falls inside
/// tol.boundary_band; pass a band of 0 to force a strict sign decision.
StabilityReport classify_undamped(const MuPoly& p, const ToleranceSet& tol = {});

/// Routh-Hurwitz classification of a damped characteristic polynomial
/// (computed on the deflated coefficients). Requires a genuinely damped
/// polynomial: some odd coefficient nonzero.
StabilityReport hurwitz_classify(const CharPoly& p, const ToleranceSet& tol = {});

/// Dispatches on the damping vector: mu-path for undamped configs,
/// Hurwitz-path otherwise.
StabilityReport classify(const PendulumConfig& cfg, double load, const ToleranceSet& tol = {});

/// True for the two strictly stable classes.
inline bool is_strictly_stable(const StabilityReport& r) {
    return r.cls == StabilityClass::MARGINALLY_STABLE ||
           r.cls == StabilityClass::ASYMPTOTICALLY_STABLE;
}

}  // namespace ziegler
