#include "ziegler/stability.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>

#include "ziegler/errors.hpp"

namespace ziegler {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Discrimination matrix of an arbitrary descending coefficient list of
// degree n >= 1 (row pattern: f and f' interleaved, shifting right).
Eigen::MatrixXd discrimination_matrix_of(const std::vector<double>& a) {
    const int n = static_cast<int>(a.size()) - 1;
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j <= n && k + j < 2 * n; ++j) s(2 * k, k + j) = a[j];
        for (int j = 0; j < n && k + 1 + j < 2 * n; ++j)
            s(2 * k + 1, k + 1 + j) = static_cast<double>(n - j) * a[j];
    }
    return s;
}

// Minor determinants plus Hadamard-style row-norm scales for margins.
void minor_determinants(const Eigen::MatrixXd& s, int order_step,
                        std::vector<double>& dets, std::vector<double>& scales) {
    for (int k = order_step; k <= s.rows(); k += order_step) {
        const Eigen::MatrixXd block = s.topLeftCorner(k, k);
        dets.push_back(block.determinant());
        long double had = 1.0L;
        for (int i = 0; i < k; ++i) had *= std::max<long double>(block.row(i).norm(), 1e-300L);
        scales.push_back(static_cast<double>(had));
    }
}

}  // namespace

const char* to_string(StabilityClass c) {
    switch (c) {
        case StabilityClass::MARGINALLY_STABLE: return "MARGINALLY_STABLE";
        case StabilityClass::FLUTTER: return "FLUTTER";
        case StabilityClass::DIVERGENCE: return "DIVERGENCE";
        case StabilityClass::FLUTTER_AND_DIVERGENCE: return "FLUTTER_AND_DIVERGENCE";
        case StabilityClass::BOUNDARY: return "BOUNDARY";
        case StabilityClass::ASYMPTOTICALLY_STABLE: return "ASYMPTOTICALLY_STABLE";
        case StabilityClass::UNSTABLE_DAMPED: return "UNSTABLE_DAMPED";
    }
    return "?";
}

DiscriminationMatrix discrimination_matrix(const MuPoly& p) {
    if (p.nominal_degree() < 1)
        throw std::invalid_argument("discrimination_matrix: degree must be >= 1");
    return {discrimination_matrix_of(p.coeffs)};
}

std::vector<double> discriminant_sequence(const MuPoly& p) {
    const Eigen::MatrixXd s = discrimination_matrix(p).entries;
    std::vector<double> dets, scales;
    minor_determinants(s, 2, dets, scales);
    return dets;
}

StabilityReport classify_undamped(const MuPoly& p, const ToleranceSet& tol) {
    StabilityReport rep;
    rep.spectrum_in_mu = true;
    rep.spectrum = roots(p, tol);
    rep.infinite_count = rep.spectrum.infinite_count;
    rep.discriminants = discriminant_sequence(p);

    const auto& mu = rep.spectrum.roots;

    bool any_nonreal = false, any_real_pos = false;
    double margin = kInf;
    for (const auto& z : mu) {
        const double az = std::max(std::abs(z), 1e-300);
        const bool real = std::abs(z.imag()) <= tol.imag_axis * az;
        if (!real) {
            any_nonreal = true;
            margin = std::min(margin, std::abs(z.imag()) / az);
        } else if (z.real() > 0.0) {
            any_real_pos = true;
        }
    }
    for (std::size_t i = 0; i < mu.size(); ++i)
        for (std::size_t j = i + 1; j < mu.size(); ++j) {
            const double sc = std::max({std::abs(mu[i]), std::abs(mu[j]), 1e-300});
            margin = std::min(margin, std::abs(mu[i] - mu[j]) / sc);
        }

    if (p.effective_degree >= 1) {
        const std::vector<double> core(p.coeffs.end() - (p.effective_degree + 1), p.coeffs.end());
        double cmax = 0.0;
        for (double c : core) cmax = std::max(cmax, std::abs(c));
        // Divergence boundary: the constant coefficient (det K up to mass
        // scaling) passes through zero when a root crosses the origin.
        margin = std::min(margin, std::abs(core.back()) / cmax);
        // Flutter boundary: near-coincident roots are resolved far more
        // sharply through the discriminant of the coefficients than
        // through the extracted root values themselves.
        std::vector<double> dets, scales;
        minor_determinants(discrimination_matrix_of(core), 2, dets, scales);
        if (!dets.empty())
            margin = std::min(margin, std::abs(dets.back()) / scales.back());
    }

    rep.boundary_distance = margin;
    if (any_nonreal && any_real_pos)
        rep.cls = StabilityClass::FLUTTER_AND_DIVERGENCE;
    else if (any_nonreal)
        rep.cls = StabilityClass::FLUTTER;
    else if (any_real_pos)
        rep.cls = StabilityClass::DIVERGENCE;
    else
        rep.cls = StabilityClass::MARGINALLY_STABLE;
    if (margin < tol.boundary_band) rep.cls = StabilityClass::BOUNDARY;
    return rep;
}

StabilityReport hurwitz_classify(const CharPoly& p, const ToleranceSet& tol) {
    double scale = 0.0;
    for (double c : p.coeffs) scale = std::max(scale, std::abs(c));
    bool any_odd = false;
    for (std::size_t i = 1; i < p.coeffs.size(); i += 2)
        any_odd = any_odd || std::abs(p.coeffs[i]) > 1e-12 * scale;
    if (!any_odd)
        throw std::invalid_argument("hurwitz_classify: polynomial is even; use classify_undamped");

    StabilityReport rep;
    rep.spectrum_in_mu = false;
    rep.spectrum = roots(p, tol);
    rep.infinite_count = rep.spectrum.infinite_count;

    std::vector<double> a(p.coeffs.begin() + p.infinite_count, p.coeffs.end());
    if (a.front() < 0.0)
        for (double& c : a) c = -c;
    const int n = static_cast<int>(a.size()) - 1;

    bool stable = a.front() > 0.0;
    if (n >= 1) {
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const int idx = 2 * (j + 1) - (i + 1);
                if (idx >= 0 && idx <= n) h(i, j) = a[idx];
            }
        std::vector<double> dets, scales;
        minor_determinants(h, 1, dets, scales);
        rep.hurwitz_minors = dets;
        for (double d : dets) stable = stable && d > 0.0;
    }

    // Boundary margin from scale-free quantities: the crossing pair sits
    // on the imaginary axis (per-root relative real part) and the static
    // boundary is the constant coefficient passing through zero. Raw
    // minor determinants make poor margins: their magnitude scale is
    // exponentially loose in the block order.
    double margin = kInf;
    for (const auto& z : rep.spectrum.roots)
        margin = std::min(margin, std::abs(z.real()) / std::max(std::abs(z), 1e-300));
    double cmax = 0.0;
    for (double c : a) cmax = std::max(cmax, std::abs(c));
    if (cmax > 0.0) margin = std::min(margin, std::abs(a.back()) / cmax);

    rep.boundary_distance = margin;
    rep.cls = stable ? StabilityClass::ASYMPTOTICALLY_STABLE : StabilityClass::UNSTABLE_DAMPED;
    if (margin < tol.boundary_band) rep.cls = StabilityClass::BOUNDARY;
    return rep;
}

StabilityReport classify(const PendulumConfig& cfg, double load, const ToleranceSet& tol) {
    const MatrixTriple triple = assemble(cfg, load);
    const CharPoly p = char_poly(triple, tol);
    if (cfg.undamped()) return classify_undamped(to_mu_poly(p, 1e-12, tol.deflation), tol);
    return hurwitz_classify(p, tol);
}

}  // namespace ziegler
