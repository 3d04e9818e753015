#include "ziegler/charpoly.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "ziegler/errors.hpp"
#include "ziegler/polyops.hpp"

namespace ziegler {

namespace {

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

void set_deflation(CharPoly& p, double deflation_tol) {
    const double scale = max_abs(p.coeffs);
    int lead = 0;
    if (scale == 0.0) {
        lead = static_cast<int>(p.coeffs.size()) - 1;
    } else {
        while (lead < static_cast<int>(p.coeffs.size()) - 1 &&
               std::abs(p.coeffs[lead]) <= deflation_tol * scale)
            ++lead;
    }
    p.infinite_count = lead;
    p.effective_degree = p.nominal_degree() - lead;
}

// Parlett/Reinsch-style balancing by powers of two; improves companion
// eigenvalue accuracy for badly scaled coefficients.
void balance(Eigen::MatrixXd& a) {
    const int n = static_cast<int>(a.rows());
    bool changed = true;
    for (int sweep = 0; sweep < 32 && changed; ++sweep) {
        changed = false;
        for (int i = 0; i < n; ++i) {
            double r = a.row(i).lpNorm<1>() - std::abs(a(i, i));
            double c = a.col(i).lpNorm<1>() - std::abs(a(i, i));
            if (r == 0.0 || c == 0.0) continue;
            double f = 1.0;
            const double s = c + r;
            while (c < r / 2.0) {
                c *= 2.0;
                r /= 2.0;
                f *= 2.0;
            }
            while (c >= r * 2.0) {
                c /= 2.0;
                r *= 2.0;
                f /= 2.0;
            }
            if (c + r < 0.95 * s && f != 1.0) {
                a.row(i) /= f;
                a.col(i) *= f;
                changed = true;
            }
        }
    }
}

std::complex<double> newton_polish(const polyops::Poly& asc, std::complex<double> z) {
    using C = std::complex<long double>;
    C zz(z.real(), z.imag());
    for (int it = 0; it < 3; ++it) {
        C f = 0.0L, fp = 0.0L;
        for (std::size_t k = asc.size(); k-- > 0;) {
            fp = fp * zz + f;
            f = f * zz + static_cast<long double>(asc[k]);
        }
        const long double afp = std::abs(fp);
        if (!(afp > 0.0L)) break;
        const C step = f / fp;
        if (!(std::abs(step) < 0.25L * (1.0L + std::abs(zz)))) break;
        const C znew = zz - step;
        C fn = 0.0L;
        for (std::size_t k = asc.size(); k-- > 0;) fn = fn * znew + static_cast<long double>(asc[k]);
        if (std::abs(fn) < std::abs(f))
            zz = znew;
        else
            break;
    }
    return {static_cast<double>(zz.real()), static_cast<double>(zz.imag())};
}

// Roots of the ascending polynomial (nonzero leading and trailing entries
// expected). Degrees 1 and 2 in closed form, otherwise balanced companion
// eigenvalues with a Newton polish.
std::vector<std::complex<double>> dense_roots(const polyops::Poly& asc) {
    const int n = static_cast<int>(asc.size()) - 1;
    std::vector<std::complex<double>> out;
    if (n <= 0) return out;
    if (n == 1) {
        out.emplace_back(-asc[0] / asc[1], 0.0);
        return out;
    }
    if (n == 2) {
        const double a = asc[2], b = asc[1], c = asc[0];
        const double disc = b * b - 4.0 * a * c;
        if (disc >= 0.0) {
            const double sq = std::sqrt(disc);
            const double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
            if (q != 0.0) {
                out.emplace_back(q / a, 0.0);
                out.emplace_back(c / q, 0.0);
            } else {
                out.emplace_back(0.0, 0.0);
                out.emplace_back(-b / a, 0.0);
            }
        } else {
            const double re = -0.5 * b / a;
            const double im = 0.5 * std::sqrt(-disc) / std::abs(a);
            out.emplace_back(re, im);
            out.emplace_back(re, -im);
        }
        return out;
    }

    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) comp(i + 1, i) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -asc[i] / asc[n];
    balance(comp);
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, /*computeEigenvectors=*/false);
    for (int i = 0; i < n; ++i) out.push_back(newton_polish(asc, es.eigenvalues()[i]));

    // Re-pair conjugates exactly (polish can detune a pair slightly).
    std::vector<int> pos, neg;
    for (int i = 0; i < n; ++i) {
        if (out[i].imag() > 0.0) pos.push_back(i);
        else if (out[i].imag() < 0.0) neg.push_back(i);
    }
    auto by_re = [&](int a, int b) {
        return std::abs(out[a].imag()) != std::abs(out[b].imag())
                   ? std::abs(out[a].imag()) < std::abs(out[b].imag())
                   : out[a].real() < out[b].real();
    };
    std::sort(pos.begin(), pos.end(), by_re);
    std::sort(neg.begin(), neg.end(), by_re);
    for (std::size_t k = 0; k < std::min(pos.size(), neg.size()); ++k) {
        const auto z = out[pos[k]], w = out[neg[k]];
        const std::complex<double> u(0.5 * (z.real() + w.real()), 0.5 * (z.imag() - w.imag()));
        out[pos[k]] = u;
        out[neg[k]] = std::conj(u);
    }
    return out;
}

}  // namespace

CharPoly char_poly(const MatrixTriple& triple, const ToleranceSet& tol) {
    const int m = static_cast<int>(triple.M.rows());
    if (m < 2 || triple.M.cols() != m || triple.D.rows() != m || triple.D.cols() != m ||
        triple.K.rows() != m || triple.K.cols() != m)
        throw std::invalid_argument("char_poly: inconsistent matrix sizes");
    if (m > 16) throw std::invalid_argument("char_poly: link counts above 16 not supported");

    std::vector<std::vector<polyops::Poly>> entries(m, std::vector<polyops::Poly>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) entries[i][j] = {triple.K(i, j), triple.D(i, j), triple.M(i, j)};

    polyops::Poly det = polyops::det(entries);
    det.resize(2 * m + 1, 0.0);

    CharPoly p;
    p.link_count = m;
    p.coeffs.assign(det.rbegin(), det.rend());
    set_deflation(p, tol.deflation);
    return p;
}

CharPoly char_poly_trace_m2(const MatrixTriple& triple, const ToleranceSet& tol) {
    if (triple.M.rows() != 2 || triple.M.cols() != 2)
        throw std::invalid_argument("char_poly_trace_m2: requires m == 2");
    if (triple.D.cwiseAbs().maxCoeff() != 0.0)
        throw std::invalid_argument("char_poly_trace_m2: requires zero damping");

    const auto& M = triple.M;
    const auto& K = triple.K;
    const double det_m = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
    const double det_k = K(0, 0) * K(1, 1) - K(0, 1) * K(1, 0);
    const double mid = M.trace() * K.trace() - (M * K).trace();

    CharPoly p;
    p.link_count = 2;
    p.coeffs = {det_m, 0.0, mid, 0.0, det_k};
    set_deflation(p, tol.deflation);
    return p;
}

MuPoly to_mu_poly(const CharPoly& p, double odd_tol, double deflation_tol) {
    const double scale = max_abs(p.coeffs);
    for (std::size_t i = 1; i < p.coeffs.size(); i += 2)
        if (std::abs(p.coeffs[i]) > odd_tol * scale)
            throw OddCoefficientsPresent("odd lambda coefficients present; system is damped");

    MuPoly q;
    q.link_count = p.link_count;
    for (std::size_t i = 0; i < p.coeffs.size(); i += 2) q.coeffs.push_back(p.coeffs[i]);

    const double qs = max_abs(q.coeffs);
    int lead = 0;
    if (qs == 0.0) {
        lead = static_cast<int>(q.coeffs.size()) - 1;
    } else {
        while (lead < static_cast<int>(q.coeffs.size()) - 1 &&
               std::abs(q.coeffs[lead]) <= deflation_tol * qs)
            ++lead;
    }
    q.infinite_count = lead;
    q.effective_degree = q.nominal_degree() - lead;
    return q;
}

Spectrum roots_of_coeffs(const std::vector<double>& descending, int infinite_count,
                         const ToleranceSet& tol) {
    const double scale = max_abs(descending);
    if (scale == 0.0) throw ZeroPolynomial("all coefficients vanish");

    int lead = infinite_count;
    while (lead < static_cast<int>(descending.size()) - 1 &&
           std::abs(descending[lead]) <= tol.deflation * scale)
        ++lead;
    int tail = 0;
    while (static_cast<int>(descending.size()) - 1 - tail > lead &&
           std::abs(descending[descending.size() - 1 - tail]) <= tol.deflation * scale)
        ++tail;

    // mid holds the nonzero core; tail exact-zero roots are appended back.
    polyops::Poly asc(descending.rbegin() + tail, descending.rend() - lead);

    Spectrum s;
    s.infinite_count = lead;
    s.roots = dense_roots(asc);
    for (int i = 0; i < tail; ++i) s.roots.emplace_back(0.0, 0.0);

    std::sort(s.roots.begin(), s.roots.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });

    // Multiplicity clusters by union-find over the relative radius.
    const int n = static_cast<int>(s.roots.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double radius =
                tol.cluster_radius * std::max(std::abs(s.roots[i]), std::abs(s.roots[j]));
            if (std::abs(s.roots[i] - s.roots[j]) <= radius) parent[find(i)] = find(j);
        }
    std::vector<int> count(n, 0);
    for (int i = 0; i < n; ++i) ++count[find(i)];
    s.multiplicity.resize(n);
    for (int i = 0; i < n; ++i) s.multiplicity[i] = count[find(i)];
    return s;
}

Spectrum roots(const CharPoly& p, const ToleranceSet& tol) {
    return roots_of_coeffs(p.coeffs, p.infinite_count, tol);
}

Spectrum roots(const MuPoly& p, const ToleranceSet& tol) {
    return roots_of_coeffs(p.coeffs, p.infinite_count, tol);
}

}  // namespace ziegler
