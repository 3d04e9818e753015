#include "ziegler/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "ziegler/errors.hpp"

namespace ziegler {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Signals that an evaluation blew past the search cap while some mass
// headed to zero; unwinds the simplex loop for that start.
struct UnboundedRay {
    std::vector<double> point;
};

double halton(std::uint64_t index, int base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

// Normalized critical load; +inf past the cap, NaN treated as worst.
double objective_p(const PendulumConfig& base, const std::vector<double>& masses,
                   const SearchSettings& s) {
    PendulumConfig cfg = base;
    cfg.masses = masses;
    try {
        validate(cfg);
    } catch (const ConfigError&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    try {
        const CriticalLoad cl = critical_load_numeric(cfg, s);
        return cl.normalized;  // +inf when UNBOUNDED
    } catch (const UnstableAtZeroLoad&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

struct Simplex {
    std::vector<std::vector<double>> x;
    std::vector<double> f;
};

// Nelder-Mead with projection onto the box. Signed objective: minimize.
std::pair<std::vector<double>, double> nelder_mead(
    const std::function<double(const std::vector<double>&)>& fn, std::vector<double> start,
    const std::vector<MassBounds>& bounds, int max_evals, double xtol, double ftol) {
    const int n = static_cast<int>(start.size());
    auto clamp = [&](std::vector<double> v) {
        for (int i = 0; i < n; ++i) v[i] = std::min(std::max(v[i], bounds[i].lo), bounds[i].hi);
        return v;
    };
    auto worst_of = [](double v) { return std::isnan(v) ? kInf : v; };

    int evals = 0;
    auto eval = [&](const std::vector<double>& v) {
        ++evals;
        return worst_of(fn(v));
    };

    Simplex s;
    start = clamp(std::move(start));
    s.x.push_back(start);
    s.f.push_back(eval(start));
    for (int i = 0; i < n; ++i) {
        auto v = start;
        const double h = 0.05 * (bounds[i].hi - bounds[i].lo);
        v[i] += (v[i] + h <= bounds[i].hi) ? h : -h;
        v = clamp(std::move(v));
        s.x.push_back(v);
        s.f.push_back(eval(v));
    }

    auto order = [&] {
        std::vector<int> idx(n + 1);
        for (int i = 0; i <= n; ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return s.f[a] < s.f[b]; });
        Simplex t;
        for (int i = 0; i <= n; ++i) {
            t.x.push_back(s.x[idx[i]]);
            t.f.push_back(s.f[idx[i]]);
        }
        s = std::move(t);
    };

    while (evals < max_evals) {
        order();
        double diam = 0.0;
        for (int i = 1; i <= n; ++i)
            for (int k = 0; k < n; ++k) diam = std::max(diam, std::abs(s.x[i][k] - s.x[0][k]));
        const double fspread = std::abs(s.f[n] - s.f[0]);
        if (diam <= xtol && (fspread <= ftol || !std::isfinite(fspread))) break;

        std::vector<double> centroid(n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) centroid[k] += s.x[i][k] / n;

        auto blend = [&](double t) {
            std::vector<double> v(n);
            for (int k = 0; k < n; ++k) v[k] = centroid[k] + t * (s.x[n][k] - centroid[k]);
            return clamp(std::move(v));
        };

        const auto xr = blend(-1.0);
        const double fr = eval(xr);
        if (fr < s.f[0]) {
            const auto xe = blend(-2.0);
            const double fe = eval(xe);
            if (fe < fr) {
                s.x[n] = xe;
                s.f[n] = fe;
            } else {
                s.x[n] = xr;
                s.f[n] = fr;
            }
        } else if (fr < s.f[n - 1]) {
            s.x[n] = xr;
            s.f[n] = fr;
        } else {
            const auto xc = blend(fr < s.f[n] ? -0.5 : 0.5);
            const double fc = eval(xc);
            if (fc < std::min(fr, s.f[n])) {
                s.x[n] = xc;
                s.f[n] = fc;
            } else {
                for (int i = 1; i <= n; ++i) {
                    for (int k = 0; k < n; ++k) s.x[i][k] = 0.5 * (s.x[i][k] + s.x[0][k]);
                    s.f[i] = eval(s.x[i]);
                }
            }
        }
    }
    order();
    return {s.x[0], s.f[0]};
}

void run_indexed(int count, int jobs, const std::function<void(int)>& body) {
    jobs = std::max(1, jobs);
    if (jobs == 1 || count <= 1) {
        for (int k = 0; k < count; ++k) body(k);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min(jobs, count); ++t)
        pool.emplace_back([&] {
            for (int k = next.fetch_add(1); k < count; k = next.fetch_add(1)) body(k);
        });
    for (auto& th : pool) th.join();
}

double direction_angle(const std::vector<double>& a, const std::vector<double>& b) {
    double na = 0.0, nb = 0.0, dot = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        na += a[k] * a[k];
        nb += b[k] * b[k];
        dot += a[k] * b[k];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    const double c = std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
    return std::acos(c);
}

ExtremumReport make_unbounded_report(const PendulumConfig& base, std::vector<double> point,
                                     Sense sense, const SearchSettings& s) {
    ExtremumReport rep;
    rep.sense = sense;
    rep.unbounded = true;
    rep.objective = kInf;
    rep.kind = ExtremumKind::UNBOUNDED_DIRECTION;
    rep.masses = point;
    rep.ascent_direction = point;

    // Shrink the vanishing masses along the ray and record the capped
    // objectives: evidence that the load exceeds every tested bound.
    double mmax = 0.0;
    for (double v : point) mmax = std::max(mmax, v);
    std::vector<int> vanishing;
    for (std::size_t k = 0; k < point.size(); ++k)
        if (point[k] <= 1e-3 * mmax) vanishing.push_back(static_cast<int>(k) + 1);
    rep.certificate.active_lower_bounds = vanishing;
    SearchSettings probe = s;
    for (double shrink : {1.0, 0.5, 0.25}) {
        auto v = point;
        for (int idx : vanishing) v[idx - 1] *= shrink;
        probe.p_max = std::min(4.0 * probe.p_max, 1e6);
        const double val = objective_p(base, v, probe);
        rep.certificate.ray_probe_values.push_back(val);
    }
    rep.certificate.note = "objective exceeded the search cap along this ray";
    return rep;
}

std::vector<ExtremumReport> dedup_reports(std::vector<ExtremumReport> raw) {
    std::stable_sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) {
        if (a.unbounded != b.unbounded) return !a.unbounded && b.unbounded;
        if (a.objective != b.objective) return a.objective < b.objective;
        return a.masses < b.masses;
    });
    std::vector<ExtremumReport> out;
    for (auto& rep : raw) {
        bool dup = false;
        for (const auto& kept : out) {
            if (kept.unbounded != rep.unbounded) continue;
            if (kept.unbounded) {
                dup = direction_angle(kept.ascent_direction, rep.ascent_direction) < 1e-2;
            } else {
                const bool same_val =
                    std::abs(kept.objective - rep.objective) <= 1e-6 * (1.0 + std::abs(kept.objective));
                double dist = 0.0, scale = 0.0;
                for (std::size_t k = 0; k < rep.masses.size(); ++k) {
                    dist = std::max(dist, std::abs(kept.masses[k] - rep.masses[k]));
                    scale = std::max({scale, std::abs(kept.masses[k]), std::abs(rep.masses[k])});
                }
                const bool same_loc = dist <= 1e-4 * (1.0 + scale);
                const bool same_ray =
                    same_val && direction_angle(kept.masses, rep.masses) < 1e-4;
                dup = same_loc || same_ray;
            }
            if (dup) break;
        }
        if (!dup) out.push_back(std::move(rep));
    }
    return out;
}

}  // namespace

const char* to_string(Sense s) { return s == Sense::MIN ? "MIN" : "MAX"; }

const char* to_string(ExtremumKind k) {
    switch (k) {
        case ExtremumKind::INTERIOR_SMOOTH: return "INTERIOR_SMOOTH";
        case ExtremumKind::BOUNDARY_MASS_ZERO: return "BOUNDARY_MASS_ZERO";
        case ExtremumKind::SINGULAR_CUSP: return "SINGULAR_CUSP";
        case ExtremumKind::UNBOUNDED_DIRECTION: return "UNBOUNDED_DIRECTION";
    }
    return "?";
}

std::vector<ExtremumReport> optimize_masses(const PendulumConfig& base,
                                            const std::vector<MassBounds>& bounds, Sense sense,
                                            int starts, const SearchSettings& s,
                                            std::uint64_t seed, int jobs) {
    validate(base);
    const int n = base.link_count;
    if (static_cast<int>(bounds.size()) != n)
        throw std::invalid_argument("optimize_masses: one bound pair per mass required");
    for (const auto& b : bounds)
        if (!(b.lo >= 0.0) || !(b.hi > b.lo))
            throw std::invalid_argument("optimize_masses: bounds must satisfy 0 <= lo < hi");
    if (starts < 1) throw std::invalid_argument("optimize_masses: starts must be >= 1");

    const double sgn = sense == Sense::MAX ? -1.0 : 1.0;
    static constexpr int kBases[] = {2, 3, 5, 7, 11, 13, 17, 19};

    std::vector<std::vector<ExtremumReport>> per_start(starts);
    run_indexed(starts, jobs, [&](int st) {
        std::vector<double> x0(n);
        for (int k = 0; k < n; ++k) {
            const double u = halton(seed + 1 + static_cast<std::uint64_t>(st), kBases[k % 8]);
            x0[k] = bounds[k].lo + u * (bounds[k].hi - bounds[k].lo);
        }
        auto fn = [&](const std::vector<double>& v) {
            const double p = objective_p(base, v, s);
            if (sense == Sense::MAX && !(p <= s.p_max)) throw UnboundedRay{v};
            return sgn * p;
        };
        try {
            double scale_hi = 0.0;
            for (const auto& b : bounds) scale_hi = std::max(scale_hi, b.hi);
            const auto [x, f] =
                nelder_mead(fn, x0, bounds, 300 * n, 1e-8 * scale_hi, 1e-11);
            if (!std::isfinite(f)) return;
            ExtremumReport rep;
            rep.sense = sense;
            rep.masses = x;
            rep.objective = sgn * f;
            per_start[st].push_back(classify_extremum(std::move(rep), base, s));
        } catch (const UnboundedRay& ray) {
            per_start[st].push_back(make_unbounded_report(base, ray.point, sense, s));
        }
    });

    std::vector<ExtremumReport> all;
    for (auto& v : per_start)
        for (auto& rep : v) all.push_back(std::move(rep));
    return dedup_reports(std::move(all));
}

std::vector<ExtremumReport> optimize_azimuth(const PendulumConfig& base, int plane_i, int plane_j,
                                             double r, Sense sense, int starts,
                                             const SearchSettings& s, int jobs) {
    validate(base);
    SweepSpec family;
    family.base = base;
    family.plane_i = plane_i;
    family.plane_j = plane_j;
    family.r = r;

    const double sgn = sense == Sense::MAX ? -1.0 : 1.0;
    const double pi2 = 1.5707963267948966;
    std::vector<std::vector<ExtremumReport>> per_start(starts);
    run_indexed(starts, jobs, [&](int st) {
        const double a0 = pi2 * (st + 0.5) / starts;
        auto fn = [&](const std::vector<double>& v) {
            const PendulumConfig cfg = config_at_alpha(family, v[0]);
            const double p = objective_p(cfg, cfg.masses, s);
            if (sense == Sense::MAX && !(p <= s.p_max)) throw UnboundedRay{cfg.masses};
            return sgn * p;
        };
        try {
            const std::vector<MassBounds> box{{0.0, pi2}};
            const auto [x, f] = nelder_mead(fn, {a0}, box, 400, 1e-10, 1e-12);
            if (!std::isfinite(f)) return;
            const PendulumConfig cfg = config_at_alpha(family, x[0]);
            ExtremumReport rep;
            rep.sense = sense;
            rep.masses = cfg.masses;
            rep.objective = sgn * f;
            rep.plane_i = plane_i;
            rep.plane_j = plane_j;
            rep.r = r;
            rep.alpha = x[0];
            per_start[st].push_back(classify_extremum(std::move(rep), base, s));
        } catch (const UnboundedRay& ray) {
            per_start[st].push_back(make_unbounded_report(base, ray.point, sense, s));
        }
    });

    std::vector<ExtremumReport> all;
    for (auto& v : per_start)
        for (auto& rep : v) all.push_back(std::move(rep));
    return dedup_reports(std::move(all));
}

ExtremumReport classify_extremum(ExtremumReport report, const PendulumConfig& base,
                                 const SearchSettings& s) {
    if (report.unbounded) {
        report.kind = ExtremumKind::UNBOUNDED_DIRECTION;
        return report;
    }

    double mmax = 0.0;
    for (double v : report.masses) mmax = std::max(mmax, v);

    // Near-coalescent triple eigenvalue at the critical load -> cusp.
    try {
        PendulumConfig cfg = base;
        cfg.masses = report.masses;
        const CriticalLoad cl = critical_load_numeric(cfg, s);
        if (std::isfinite(cl.value) && cfg.undamped()) {
            const auto q = to_mu_poly(char_poly(assemble(cfg, cl.value)));
            const auto spec = roots(q, s.tol);
            double best_sep = kInf;
            std::complex<double> mu0;
            const auto& zs = spec.roots;
            for (std::size_t i = 0; i < zs.size(); ++i)
                for (std::size_t j = i + 1; j < zs.size(); ++j)
                    for (std::size_t k = j + 1; k < zs.size(); ++k) {
                        const double sep = std::abs(zs[i] - zs[j]) + std::abs(zs[j] - zs[k]) +
                                           std::abs(zs[i] - zs[k]);
                        if (sep < best_sep) {
                            best_sep = sep;
                            mu0 = (zs[i] + zs[j] + zs[k]) / 3.0;
                        }
                    }
            const double scale = std::max(std::abs(mu0), 1e-300);
            if (best_sep < 3e-2 * scale && report.plane_i && report.plane_j) {
                SweepSpec family;
                family.base = base;
                family.plane_i = *report.plane_i;
                family.plane_j = *report.plane_j;
                family.r = *report.r;
                try {
                    SingularPoint cusp = find_triple_root_cusp(
                        family, {report.alpha.value_or(0.5), cl.value, mu0.real()}, 1e-9);
                    report.kind = ExtremumKind::SINGULAR_CUSP;
                    report.certificate.cusp = std::move(cusp);
                    return report;
                } catch (const std::exception&) {
                    // not actually a cusp; fall through
                }
            }
        }
    } catch (const std::exception&) {
    }

    std::vector<int> active;
    for (std::size_t k = 0; k < report.masses.size(); ++k)
        if (report.masses[k] <= 1e-7 * std::max(1.0, mmax)) active.push_back(static_cast<int>(k) + 1);
    if (!active.empty()) {
        report.kind = ExtremumKind::BOUNDARY_MASS_ZERO;
        report.certificate.active_lower_bounds = std::move(active);
        return report;
    }

    // Central-difference gradient of the objective at the point.
    double g2 = 0.0;
    const double h0 = 1e-5 * std::max(1.0, mmax);
    for (std::size_t k = 0; k < report.masses.size(); ++k) {
        auto hi = report.masses, lo = report.masses;
        hi[k] += h0;
        lo[k] = std::max(lo[k] - h0, 0.0);
        const double fp = objective_p(base, hi, s);
        const double fm = objective_p(base, lo, s);
        if (std::isfinite(fp) && std::isfinite(fm)) {
            const double g = (fp - fm) / (hi[k] - lo[k]);
            g2 += g * g;
        }
    }
    report.certificate.gradient_norm = std::sqrt(g2);
    report.kind = ExtremumKind::INTERIOR_SMOOTH;
    if (report.certificate.gradient_norm > 1e-2)
        report.certificate.note = "gradient is not small; extremum sits at a non-smooth point";
    return report;
}

}  // namespace ziegler
