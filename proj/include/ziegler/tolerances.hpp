#pragma once

namespace ziegler {

/// Numeric tolerances shared across classification and root analysis.
/// All values are relative to the local magnitude scale of the quantity
/// they gate.
struct ToleranceSet {
    /// Width of the BOUNDARY band: a configuration is reported as sitting
    /// on a stability boundary when some deciding quantity (discriminant,
    /// Hurwitz minor, root separation, root distance to zero) is smaller
    /// than this, relative to its scale.
    double boundary_band = 1e-9;

    /// A root mu (or lambda) counts as real (or pure imaginary) when its
    /// off-axis part is below this fraction of the root magnitude.
    double imag_axis = 1e-8;

    /// Leading/trailing polynomial coefficients below this fraction of the
    /// largest coefficient are deflated; deflated leading coefficients are
    /// counted as eigenvalues at infinity.
    double deflation = 1e-13;

    /// Roots closer than this fraction of their magnitude are reported as
    /// one multiplicity cluster.
    double cluster_radius = 1e-6;
};

}  // namespace ziegler
