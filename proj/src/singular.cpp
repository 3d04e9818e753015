#include "ziegler/singular.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "ziegler/errors.hpp"
#include "ziegler/polyops.hpp"

namespace ziegler {

namespace {

using polyops::Poly;

constexpr double kPi2 = 1.5707963267948966;

// mu-pencil entries of the undamped family at (alpha, P), plus the exact
// partial-derivative entry matrices. Ascending in mu: {K_ij, M_ij}.
struct FamilyPencil {
    std::vector<std::vector<Poly>> a;       // mu*M + K
    std::vector<std::vector<Poly>> da_dal;  // mu * dM/dalpha
    std::vector<std::vector<Poly>> da_dp;   // dK/dP
};

FamilyPencil family_pencil(const SweepSpec& family, double alpha, double load) {
    PendulumConfig cfg = family.base;
    const int m = cfg.link_count;
    const double l = cfg.link_length;
    cfg.masses[family.plane_i - 1] = family.r * std::cos(alpha);
    cfg.masses[family.plane_j - 1] = family.r * std::sin(alpha);

    std::vector<double> dm(m, 0.0);
    dm[family.plane_i - 1] = -family.r * std::sin(alpha);
    dm[family.plane_j - 1] = family.r * std::cos(alpha);

    std::vector<double> tail(m + 1, 0.0), dtail(m + 1, 0.0);
    for (int i = m - 1; i >= 0; --i) {
        tail[i] = tail[i + 1] + cfg.masses[i];
        dtail[i] = dtail[i + 1] + dm[i];
    }

    // Assemble K here instead of through assemble(): the family is allowed
    // to pass through zero-mass axes where cfg validation would object.
    const auto& c = cfg.stiffnesses;
    FamilyPencil fp;
    fp.a.assign(m, std::vector<Poly>(m, Poly{0.0, 0.0}));
    fp.da_dal.assign(m, std::vector<Poly>(m, Poly{0.0, 0.0}));
    fp.da_dp.assign(m, std::vector<Poly>(m, Poly{0.0}));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            fp.a[i][j][1] = l * l * tail[std::max(i, j)];
            fp.da_dal[i][j][1] = l * l * dtail[std::max(i, j)];
        }
        const double c_next = (i + 1 < m) ? c[i + 1] : 0.0;
        fp.a[i][i][0] += c[i] + c_next;
        if (i + 1 < m) {
            fp.a[i][i + 1][0] += -c_next;
            fp.a[i + 1][i][0] += -c_next;
        }
        if (i < m - 1) {
            fp.a[i][i][0] += -load * l;
            fp.a[i][m - 1][0] += load * l;
            fp.da_dp[i][i][0] += -l;
            fp.da_dp[i][m - 1][0] += l;
        }
    }
    return fp;
}

// d(det A)/dt = sum over rows of det(A with that row replaced by dA/dt).
Poly det_derivative(const std::vector<std::vector<Poly>>& a,
                    const std::vector<std::vector<Poly>>& da) {
    const int m = static_cast<int>(a.size());
    Poly acc{0.0};
    for (int k = 0; k < m; ++k) {
        auto mod = a;
        mod[k] = da[k];
        const Poly term = polyops::det(mod);
        if (acc.size() < term.size()) acc.resize(term.size(), 0.0);
        for (std::size_t u = 0; u < term.size(); ++u) acc[u] += term[u];
    }
    return acc;
}

struct CuspEquations {
    Poly f, f1, f2, f3;
    Poly fa, fa1, fa2;
    Poly fp, fp1, fp2;
};

CuspEquations cusp_equations(const SweepSpec& family, double alpha, double load) {
    const FamilyPencil fp = family_pencil(family, alpha, load);
    CuspEquations eq;
    eq.f = polyops::det(fp.a);
    eq.f1 = polyops::derivative(eq.f);
    eq.f2 = polyops::derivative(eq.f1);
    eq.f3 = polyops::derivative(eq.f2);
    eq.fa = det_derivative(fp.a, fp.da_dal);
    eq.fa1 = polyops::derivative(eq.fa);
    eq.fa2 = polyops::derivative(eq.fa1);
    eq.fp = det_derivative(fp.a, fp.da_dp);
    eq.fp1 = polyops::derivative(eq.fp);
    eq.fp2 = polyops::derivative(eq.fp1);
    return eq;
}

Eigen::Vector3d residual_scales(const CuspEquations& eq, double mu) {
    return {std::max(polyops::eval_scale(eq.f, mu), 1e-300),
            std::max(polyops::eval_scale(eq.f1, mu), 1e-300),
            std::max(polyops::eval_scale(eq.f2, mu), 1e-300)};
}

Eigen::Vector3d cusp_residual(const CuspEquations& eq, double mu) {
    return {polyops::eval(eq.f, mu), polyops::eval(eq.f1, mu), polyops::eval(eq.f2, mu)};
}

int jordan_order_of_coeffs(std::vector<double> descending, int infinite_count,
                           std::complex<double> root, double tol) {
    descending.erase(descending.begin(), descending.begin() + infinite_count);
    Poly asc(descending.rbegin(), descending.rend());
    const int degree = static_cast<int>(asc.size()) - 1;

    int order = 0;
    Poly d = asc;
    while (order <= degree) {
        const double scale = std::max(polyops::eval_scale(d, std::abs(root)), 1e-300);
        if (std::abs(polyops::eval(d, root)) > tol * scale) break;
        ++order;
        d = polyops::derivative(d);
    }
    if (order == 0) throw NotARoot("jordan_order_at: point is not a root within tolerance");
    return order;
}

}  // namespace

const char* to_string(SingularKind k) {
    switch (k) {
        case SingularKind::DOUBLE_IMAGINARY: return "DOUBLE_IMAGINARY";
        case SingularKind::DOUBLE_REAL: return "DOUBLE_REAL";
        case SingularKind::TRIPLE_IMAGINARY_CUSP: return "TRIPLE_IMAGINARY_CUSP";
        case SingularKind::VERTICAL_TANGENT: return "VERTICAL_TANGENT";
        case SingularKind::UMBRELLA_APEX: return "UMBRELLA_APEX";
    }
    return "?";
}

int jordan_order_at(const MuPoly& p, std::complex<double> root, double tol) {
    return jordan_order_of_coeffs(p.coeffs, p.infinite_count, root, tol);
}

int jordan_order_at(const CharPoly& p, std::complex<double> root, double tol) {
    return jordan_order_of_coeffs(p.coeffs, p.infinite_count, root, tol);
}

SingularPoint find_triple_root_cusp(const SweepSpec& family, std::array<double, 3> guess,
                                    double tol) {
    if (!family.base.undamped())
        throw std::invalid_argument("find_triple_root_cusp: family must be undamped");

    double mu = guess[2], alpha = guess[0], load = guess[1];
    const double target = std::min(tol, 1e-12);

    auto scaled_norm = [&](double mu_, double al_, double p_) {
        const CuspEquations eq = cusp_equations(family, al_, p_);
        const Eigen::Vector3d g = cusp_residual(eq, mu_);
        const Eigen::Vector3d s = residual_scales(eq, mu_);
        return (g.array() / s.array()).matrix().norm();
    };

    int stagnated = 0;
    for (int it = 0; it < 200; ++it) {
        const CuspEquations eq = cusp_equations(family, alpha, load);
        const Eigen::Vector3d g = cusp_residual(eq, mu);
        const Eigen::Vector3d s = residual_scales(eq, mu);
        const double res_norm = (g.array() / s.array()).matrix().norm();
        if (res_norm < target) break;

        Eigen::Matrix3d jac;
        jac << polyops::eval(eq.f1, mu), polyops::eval(eq.fa, mu), polyops::eval(eq.fp, mu),
            polyops::eval(eq.f2, mu), polyops::eval(eq.fa1, mu), polyops::eval(eq.fp1, mu),
            polyops::eval(eq.f3, mu), polyops::eval(eq.fa2, mu), polyops::eval(eq.fp2, mu);
        // row-equilibrate so all three equations carry comparable weight
        for (int row = 0; row < 3; ++row) jac.row(row) /= s[row];
        const Eigen::Vector3d step = jac.fullPivLu().solve(-(g.array() / s.array()).matrix());
        if (!step.allFinite()) break;

        double t = 1.0;
        bool moved = false;
        for (int ls = 0; ls < 30; ++ls, t *= 0.5) {
            if (scaled_norm(mu + t * step[0], alpha + t * step[1], load + t * step[2]) <
                res_norm * (1.0 - 1e-4 * t)) {
                mu += t * step[0];
                alpha += t * step[1];
                load += t * step[2];
                moved = true;
                break;
            }
        }
        if (!moved) {
            // take a cautious full fraction once; repeated stagnation ends
            if (++stagnated > 3) break;
            mu += 0.1 * step[0];
            alpha += 0.1 * step[1];
            load += 0.1 * step[2];
        } else {
            stagnated = 0;
        }
    }

    const CuspEquations eq = cusp_equations(family, alpha, load);
    const Eigen::Vector3d g = cusp_residual(eq, mu);
    const Eigen::Vector3d s = residual_scales(eq, mu);
    const Eigen::Vector3d rel = (g.array() / s.array()).abs();
    const bool converged = rel.maxCoeff() < tol;
    if (!converged) {
        if (rel[0] < tol && rel[1] < tol)
            throw ConvergedToLowerOrder("triple-root conditions collapsed to a double root");
        throw NoConvergence("cusp Newton did not reach the requested residual");
    }
    if (mu >= 0.0)
        throw NoConvergence("cusp Newton converged to a non-imaginary eigenvalue pair");

    SingularPoint pt;
    pt.kind = SingularKind::TRIPLE_IMAGINARY_CUSP;
    pt.alpha = alpha;
    pt.r = family.r;
    pt.load = load;
    PendulumConfig cfg = family.base;
    cfg.masses[family.plane_i - 1] = family.r * std::cos(alpha);
    cfg.masses[family.plane_j - 1] = family.r * std::sin(alpha);
    pt.masses = cfg.masses;
    pt.mu = mu;
    pt.lambda = {0.0, std::sqrt(-mu)};
    pt.residuals = {rel[0], rel[1], rel[2]};

    MuPoly f;
    f.link_count = family.base.link_count;
    f.coeffs.assign(eq.f.rbegin(), eq.f.rend());
    f.effective_degree = static_cast<int>(eq.f.size()) - 1;
    pt.jordan_order = jordan_order_at(f, pt.mu, 1e-6);
    return pt;
}

std::vector<SingularPoint> find_cusps_multistart(const SweepSpec& family, int alpha_starts,
                                                 double tol) {
    std::vector<SingularPoint> found;
    SearchSettings s;
    s.p_max = family.load_cap;
    s.scan_step = 0.05;
    for (double alpha : linspace(0.02, kPi2 - 0.02, alpha_starts)) {
        try {
            const PendulumConfig cfg = config_at_alpha(family, alpha);
            const CriticalLoad cl = critical_load_numeric(cfg, s);
            if (!std::isfinite(cl.value)) continue;
            const auto mu_roots =
                roots(to_mu_poly(char_poly(assemble(cfg, cl.value))), s.tol).roots;
            // seed mu at the most clustered pair
            double best_sep = 1e300, mu0 = -1.0;
            for (std::size_t i = 0; i < mu_roots.size(); ++i)
                for (std::size_t j = i + 1; j < mu_roots.size(); ++j)
                    if (std::abs(mu_roots[i] - mu_roots[j]) < best_sep) {
                        best_sep = std::abs(mu_roots[i] - mu_roots[j]);
                        mu0 = 0.5 * (mu_roots[i] + mu_roots[j]).real();
                    }
            found.push_back(find_triple_root_cusp(family, {alpha, cl.value, mu0}, tol));
        } catch (const std::exception&) {
            // start failed or converged elsewhere; fine
        }
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
        if (*a.alpha != *b.alpha) return *a.alpha < *b.alpha;
        return a.load < b.load;
    });
    std::vector<SingularPoint> merged;
    for (const auto& pt : found) {
        bool dup = false;
        for (const auto& q : merged)
            if (std::abs(*pt.alpha - *q.alpha) < 1e-6 * kPi2 &&
                std::abs(pt.load - q.load) < 1e-6 * (1.0 + std::abs(q.load)))
                dup = true;
        if (!dup && *pt.alpha > 1e-8 && *pt.alpha < kPi2 - 1e-8) merged.push_back(pt);
    }
    return merged;
}

std::vector<SingularPoint> find_vertical_tangent(const SweepResult& sweep) {
    std::vector<SingularPoint> out;
    const auto& rows = sweep.rows;
    if (rows.size() < 3) return out;

    std::size_t max_branches = 0;
    for (const auto& row : rows)
        if (row.error.empty()) max_branches = std::max(max_branches, row.boundaries.size());

    auto row_at = [&](double alpha) {
        return boundary_row(config_at_alpha(sweep.spec, alpha), alpha, sweep.spec.load_cap,
                            sweep.settings);
    };

    for (std::size_t b = 0; b < max_branches; ++b) {
        // slopes along this branch between consecutive usable rows; a row
        // where the branch disappears marks a fold candidate as well
        std::vector<double> slopes;
        std::vector<std::pair<std::size_t, std::size_t>> spans;
        std::vector<std::pair<std::size_t, std::size_t>> folds;
        for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
            const auto& r0 = rows[k];
            const auto& r1 = rows[k + 1];
            if (!r0.error.empty() || !r1.error.empty()) continue;
            const bool has0 = r0.boundaries.size() > b, has1 = r1.boundaries.size() > b;
            if (has0 != has1) folds.emplace_back(k, k + 1);
            if (!has0 || !has1) continue;
            const double da = r1.alpha - r0.alpha;
            if (da <= 0.0) continue;
            slopes.push_back(std::abs(r1.boundaries[b].load - r0.boundaries[b].load) / da);
            spans.emplace_back(k, k + 1);
        }
        if (slopes.size() < 2) continue;
        std::vector<double> sorted = slopes;
        std::sort(sorted.begin(), sorted.end());
        const double median = std::max(sorted[sorted.size() / 2], 1e-300);
        const double confirm_threshold = 1e3 * median;

        // candidate intervals: local maxima of the slope that already
        // stand out, plus every fold interval
        std::vector<std::pair<std::size_t, std::size_t>> candidates = folds;
        for (std::size_t c = 0; c < slopes.size(); ++c) {
            const bool peak = (c == 0 || slopes[c] >= slopes[c - 1]) &&
                              (c + 1 == slopes.size() || slopes[c] >= slopes[c + 1]);
            if (peak && slopes[c] > 3.0 * median) candidates.push_back(spans[c]);
        }

        for (const auto& span : candidates) {
            // bisect toward the steeper side; a true vertical tangent
            // keeps steepening past the confirmation threshold, anything
            // smooth plateaus and is dropped
            double lo = rows[span.first].alpha, hi = rows[span.second].alpha;
            auto branch_value = [&](double alpha, bool& ok) {
                try {
                    const SweepRow r = row_at(alpha);
                    ok = r.boundaries.size() > b;
                    return ok ? r.boundaries[b].load : 0.0;
                } catch (const std::exception&) {
                    ok = false;
                    return 0.0;
                }
            };
            bool ok_lo = rows[span.first].boundaries.size() > b;
            bool ok_hi = rows[span.second].boundaries.size() > b;
            double p_lo = ok_lo ? rows[span.first].boundaries[b].load : 0.0;
            double p_hi = ok_hi ? rows[span.second].boundaries[b].load : 0.0;
            double last_slope = 0.0;
            for (int it = 0; it < 60 && hi - lo > 1e-13 * kPi2; ++it) {
                const double mid = 0.5 * (lo + hi);
                bool ok_mid = false;
                const double pm = branch_value(mid, ok_mid);
                if (!ok_mid) {
                    // fold between: keep the side where the branch lives
                    (ok_lo ? hi : lo) = mid;
                    (ok_lo ? ok_hi : ok_lo) = false;
                    continue;
                }
                if (!ok_lo) {
                    lo = mid;
                    p_lo = pm;
                    ok_lo = true;
                    continue;
                }
                if (!ok_hi) {
                    hi = mid;
                    p_hi = pm;
                    ok_hi = true;
                    continue;
                }
                const double sl = std::abs(pm - p_lo) / std::max(mid - lo, 1e-300);
                const double sr = std::abs(p_hi - pm) / std::max(hi - mid, 1e-300);
                if (sl >= sr) {
                    hi = mid;
                    p_hi = pm;
                    last_slope = sl;
                } else {
                    lo = mid;
                    p_lo = pm;
                    last_slope = sr;
                }
            }
            if (last_slope <= confirm_threshold) continue;
            SingularPoint pt;
            pt.kind = SingularKind::VERTICAL_TANGENT;
            pt.alpha = 0.5 * (lo + hi);
            pt.r = sweep.spec.r;
            pt.load = ok_lo && ok_hi ? 0.5 * (p_lo + p_hi) : (ok_lo ? p_lo : p_hi);
            try {
                const PendulumConfig cfg = config_at_alpha(sweep.spec, *pt.alpha);
                pt.masses = cfg.masses;
                const auto mu_roots = roots(to_mu_poly(char_poly(assemble(cfg, pt.load)))).roots;
                double best = 1e300;
                for (std::size_t i = 0; i < mu_roots.size(); ++i)
                    for (std::size_t j = i + 1; j < mu_roots.size(); ++j)
                        if (std::abs(mu_roots[i] - mu_roots[j]) < best) {
                            best = std::abs(mu_roots[i] - mu_roots[j]);
                            pt.mu = 0.5 * (mu_roots[i] + mu_roots[j]);
                        }
                if (mu_roots.size() == 1) pt.mu = mu_roots[0];
                pt.lambda = pt.mu.real() <= 0.0
                                ? std::complex<double>(0.0, std::sqrt(-pt.mu.real()))
                                : std::complex<double>(std::sqrt(pt.mu.real()), 0.0);
            } catch (const std::exception&) {
            }
            pt.residuals = {1.0 / std::max(last_slope, 1e-300)};
            out.push_back(pt);
        }
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return *a.alpha < *b.alpha; });
    std::vector<SingularPoint> merged;
    for (const auto& pt : out) {
        if (!merged.empty() && std::abs(*merged.back().alpha - *pt.alpha) < 1e-5 &&
            std::abs(merged.back().load - pt.load) < 1e-5 * (1.0 + std::abs(pt.load)))
            continue;
        merged.push_back(pt);
    }
    return merged;
}

SingularPoint certify_umbrella_apex_m2(double c1, double c2, double link_length) {
    if (!(c1 > 0.0) || !(c2 > 0.0) || !(link_length > 0.0))
        throw std::invalid_argument("certify_umbrella_apex_m2: need positive c1, c2, l");

    auto config_at = [&](double alpha, double radius) {
        PendulumConfig cfg;
        cfg.link_count = 2;
        cfg.link_length = link_length;
        cfg.masses = {radius * std::cos(alpha), radius * std::sin(alpha)};
        cfg.stiffnesses = {c1, c2};
        cfg.dampings = {0.0, 0.0};
        return cfg;
    };
    auto p_lower = [&](double alpha) {
        return undamped_critical_loads_m2(config_at(alpha, 1.0)).p_lower;
    };

    // golden-section minimum over the open azimuth range
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = 1e-9, b = kPi2 - 1e-9;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = p_lower(x1), f2 = p_lower(x2);
    for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = p_lower(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = p_lower(x2);
        }
    }
    const double alpha_min = 0.5 * (a + b);
    const double p_min = p_lower(alpha_min);

    const double m1 = std::cos(alpha_min), m2 = std::sin(alpha_min);
    const double ray = std::abs(m1 * c2 - m2 * c1) / (std::abs(m1 * c2) + std::abs(m2 * c1));

    double scale_dev = 0.0;
    for (double t : {0.5, 2.0, 10.0}) {
        PendulumConfig cfg = config_at(alpha_min, t);
        scale_dev = std::max(scale_dev,
                             std::abs(undamped_critical_loads_m2(cfg).p_lower - p_min));
    }

    SearchSettings s;
    s.p_max = 50.0;
    const double p_numeric = critical_load_numeric(config_at(alpha_min, 1.0), s).normalized;

    SingularPoint pt;
    pt.kind = SingularKind::UMBRELLA_APEX;
    pt.alpha = alpha_min;
    pt.r = 0.0;  // apex sits over the mass-plane origin
    pt.masses = {m1, m2};
    pt.load = 2.0 * c2 / link_length;
    pt.residuals = {std::abs(p_min - 2.0), ray, scale_dev, std::abs(p_numeric - 2.0)};

    const auto q = to_mu_poly(char_poly(assemble(config_at(alpha_min, 1.0), pt.load)));
    const auto mu_roots = roots(q).roots;
    if (mu_roots.size() == 2) pt.mu = 0.5 * (mu_roots[0] + mu_roots[1]);
    pt.lambda = {0.0, std::sqrt(std::max(-pt.mu.real(), 0.0))};
    try {
        pt.jordan_order = jordan_order_at(q, pt.mu, 1e-5);
    } catch (const NotARoot&) {
        pt.jordan_order = 0;
    }
    return pt;
}

}  // namespace ziegler
