#pragma once

#include <complex>
#include <vector>

namespace ziegler::polyops {

/// Dense real polynomial, coefficients ascending: p[k] multiplies x^k.
using Poly = std::vector<double>;

/// Determinant of a small matrix whose entries are polynomials, by Laplace
/// expansion memoized over column subsets (no divisions, so singular
/// coefficient matrices are fine). Accumulates in extended precision.
/// entries[i][j] is the ascending coefficient list of entry (i,j).
Poly det(const std::vector<std::vector<Poly>>& entries);

/// Coefficients of dp/dx.
Poly derivative(const Poly& p);

/// Horner evaluation in extended precision.
double eval(const Poly& p, double x);
std::complex<double> eval(const Poly& p, std::complex<double> x);

/// Magnitude scale sum_k |p[k]| * max(1,|x|)^k; use to normalize residuals
/// of near-root evaluations.
double eval_scale(const Poly& p, double x);

}  // namespace ziegler::polyops
