#pragma once

#include <array>
#include <complex>
#include <optional>

#include "ziegler/sweep.hpp"

namespace ziegler {

enum class SingularKind {
    DOUBLE_IMAGINARY,
    DOUBLE_REAL,
    TRIPLE_IMAGINARY_CUSP,
    VERTICAL_TANGENT,
    UMBRELLA_APEX,
};

const char* to_string(SingularKind k);

/// A certified singular point of a stability boundary: location in the
/// sweep family's parameters, eigenvalue data at the defect, and the
/// residuals of the defining equations at the returned point.
struct SingularPoint {
    SingularKind kind = SingularKind::DOUBLE_IMAGINARY;
    std::vector<double> masses;
    std::optional<double> alpha;
    std::optional<double> r;
    double load = 0.0;  ///< raw P
    std::complex<double> mu{0.0, 0.0};
    std::complex<double> lambda{0.0, 0.0};  ///< principal member of the pair
    int jordan_order = 0;
    std::vector<double> residuals;
};

/// Solves f = f' = f'' = 0 (f the mu-polynomial of the undamped family,
/// primes in mu) for (mu, alpha, P) by damped Newton with the exact
/// Jacobian; the family coefficients are polynomial in cos(alpha),
/// sin(alpha) and P, so all derivatives are analytic. guess is
/// (alpha0, P0, mu0). Throws NoConvergence / ConvergedToLowerOrder.
SingularPoint find_triple_root_cusp(const SweepSpec& family, std::array<double, 3> guess,
                                    double tol = 1e-9);

/// Multi-start wrapper: seeds Newton from the boundary of each grid
/// azimuth and merges certified cusps by location.
std::vector<SingularPoint> find_cusps_multistart(const SweepSpec& family, int alpha_starts = 24,
                                                 double tol = 1e-9);

/// Vertical tangents dP/d(alpha) -> inf of the boundary branches of a
/// sweep: finite-difference slope blow-up candidates refined by interval
/// bisection (re-evaluating rows from the embedded spec). Branch births
/// and deaths are treated as fold candidates as well.
std::vector<SingularPoint> find_vertical_tangent(const SweepResult& sweep);

/// Certifies the apex of the self-intersecting critical-load surface of
/// the undamped two-link pendulum over the mass plane: the directional
/// minimum of the lower boundary equals p = 2 exactly on the ray
/// m1 c2 = m2 c1, independent of the radial scale, with the apex at
/// P = 2 c2 / l over the origin.
SingularPoint certify_umbrella_apex_m2(double c1, double c2, double link_length);

/// Largest k such that f, f', ..., f^(k-1) all vanish at the root within
/// tol relative to their local magnitude scales. Throws NotARoot when
/// even f(root) is large.
int jordan_order_at(const MuPoly& p, std::complex<double> root, double tol = 1e-6);
int jordan_order_at(const CharPoly& p, std::complex<double> root, double tol = 1e-6);

}  // namespace ziegler
