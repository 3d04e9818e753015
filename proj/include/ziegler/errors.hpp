#pragma once

#include <stdexcept>
#include <string>

namespace ziegler {

/// Invalid pendulum description or malformed config document.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// to_mu_poly called on a polynomial with non-negligible odd coefficients.
struct OddCoefficientsPresent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Root extraction requested for the identically-zero polynomial.
struct ZeroPolynomial : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Closed-form critical load diverges (free-end mass is zero).
struct InfiniteLoad : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Denominator of the damped closed form vanishes.
struct DegenerateDamping : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numeric critical-load search requires a stable configuration at P = 0.
struct UnstableAtZeroLoad : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Newton solve did not reach the requested residual.
struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Triple-root conditions collapsed to a lower-order root.
struct ConvergedToLowerOrder : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// jordan_order_at called with a point that is not a root.
struct NotARoot : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace ziegler
