#pragma once

#include <complex>
#include <vector>

#include "ziegler/model.hpp"
#include "ziegler/tolerances.hpp"

namespace ziegler {

/// Characteristic polynomial det(lambda^2 M + lambda D + K), coefficients
/// degree-descending over the nominal degree 2m. When the mass matrix is
/// singular the leading coefficients vanish; those lost roots are counted
/// in infinite_count rather than surfacing as huge finite numbers.
struct CharPoly {
    std::vector<double> coeffs;  ///< size nominal_degree()+1, descending
    int link_count = 0;
    int effective_degree = 0;
    int infinite_count = 0;  ///< nominal_degree() - effective_degree

    int nominal_degree() const { return 2 * link_count; }
};

/// Even characteristic polynomial rewritten in mu = lambda^2 (undamped
/// case only). Nominal degree is the link count m.
struct MuPoly {
    std::vector<double> coeffs;  ///< size link_count+1, descending
    int link_count = 0;
    int effective_degree = 0;
    int infinite_count = 0;  ///< infinities in mu

    int nominal_degree() const { return link_count; }
};

/// Finite roots with multiplicity estimates. roots.size() equals the
/// source polynomial's effective degree, so roots.size() +
/// infinite_count recovers the nominal degree; non-real roots come in
/// conjugate pairs.
struct Spectrum {
    std::vector<std::complex<double>> roots;  ///< sorted by (re, im)
    std::vector<int> multiplicity;            ///< cluster size per root
    int infinite_count = 0;
};

/// Coefficients of det(lambda^2 M + lambda D + K) by fraction-free
/// expansion over the polynomial entries; never inverts M, so degenerate
/// mass matrices are fine.
CharPoly char_poly(const MatrixTriple& triple, const ToleranceSet& tol = {});

/// Independent two-dof route: detM l^4 + (trM trK - tr(MK)) l^2 + detK.
/// Requires m == 2 and D == 0; cross-checks char_poly.
CharPoly char_poly_trace_m2(const MatrixTriple& triple, const ToleranceSet& tol = {});

/// Re-indexes an even polynomial in lambda as a polynomial in mu =
/// lambda^2. Throws OddCoefficientsPresent if any odd coefficient exceeds
/// odd_tol relative to the largest coefficient.
MuPoly to_mu_poly(const CharPoly& p, double odd_tol = 1e-12, double deflation_tol = 1e-13);

/// All finite roots of the deflated polynomial: companion-matrix
/// eigenvalues with balancing plus a Newton polish, multiplicities by
/// cluster radius. Throws ZeroPolynomial when every coefficient vanishes.
Spectrum roots(const CharPoly& p, const ToleranceSet& tol = {});
Spectrum roots(const MuPoly& p, const ToleranceSet& tol = {});

/// Root solver on a raw descending coefficient list (helper shared by the
/// wrappers above and by boundary certification code).
Spectrum roots_of_coeffs(const std::vector<double>& descending, int infinite_count,
                         const ToleranceSet& tol);

}  // namespace ziegler
