#include "ziegler/verify.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

#include "ziegler/critload.hpp"
#include "ziegler/optimize.hpp"
#include "ziegler/singular.hpp"
#include "ziegler/sweep.hpp"

namespace ziegler::verify {

namespace {

constexpr double kPi2 = 1.5707963267948966;

PendulumConfig two_link(double m1, double m2, double c1, double c2, double l = 1.0, double d1 = 0.0,
                        double d2 = 0.0) {
    PendulumConfig cfg;
    cfg.link_count = 2;
    cfg.link_length = l;
    cfg.masses = {m1, m2};
    cfg.stiffnesses = {c1, c2};
    cfg.dampings = {d1, d2};
    return cfg;
}

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), pattern, args...);
    return buf;
}

void parallel_for(int count, int jobs, const std::function<void(int)>& body) {
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

// ---- criterion bodies ---------------------------------------------------

CriterionResult ziegler_classical_values() {
    CriterionResult r{1, "Ziegler classical loads: closed and numeric equal 7/2 -/+ sqrt(2)"};
    const auto cfg = two_link(2, 1, 1, 1);
    const double lo_want = 3.5 - std::sqrt(2.0);
    const double hi_want = 3.5 + std::sqrt(2.0);

    const auto closed = undamped_critical_loads_m2(cfg);
    SearchSettings s;
    const auto numeric = critical_load_numeric(cfg, s);
    const auto row = boundary_row(cfg, 0.0, 10.0, s);

    const double e1 = std::abs(closed.p_lower - lo_want);
    const double e2 = std::abs(closed.p_upper - hi_want);
    const double e3 = std::abs(numeric.normalized - lo_want);
    const double e4 = row.boundaries.size() == 2
                          ? std::abs(row.boundaries[1].normalized - hi_want)
                          : 1.0;
    r.passed = e1 <= 1e-9 && e2 <= 1e-9 && e3 <= 1e-9 && e4 <= 1e-9 &&
               numeric.transition == Transition::FLUTTER_ONSET;
    r.detail = fmt("errors closed (%.1e, %.1e), numeric (%.1e, %.1e)", e1, e2, e3, e4);
    return r;
}

CriterionResult optimizer_minimum_grid(int jobs) {
    CriterionResult r{2, "optimizer MIN equals 2 on the ray m1 c2 = m2 c1 over the (c1,c2) grid"};
    const auto grid = linspace(0.2, 5.0, 10);
    std::atomic<int> failures{0};
    std::atomic<double> worst_val{0.0}, worst_ang{0.0};

    SearchSettings s;
    s.p_max = 50.0;
    s.scan_step = 0.05;

    parallel_for(100, jobs, [&](int cell) {
        const double c1 = grid[cell / 10], c2 = grid[cell % 10];
        const auto base = two_link(1, 1, c1, c2);
        const auto reports =
            optimize_masses(base, {{0.0, 10.0}, {0.0, 10.0}}, Sense::MIN, 6, s, 0, 1);
        double best = 1e300;
        std::vector<double> masses;
        for (const auto& rep : reports)
            if (!rep.unbounded && rep.objective < best) {
                best = rep.objective;
                masses = rep.masses;
            }
        const double val_err = std::abs(best - 2.0);
        double ang = kPi2;
        if (masses.size() == 2) {
            const double want = std::atan2(c2, c1);
            const double got = std::atan2(masses[1], masses[0]);
            ang = std::abs(got - want);
        }
        double w = worst_val.load();
        while (val_err > w && !worst_val.compare_exchange_weak(w, val_err)) {}
        w = worst_ang.load();
        while (ang > w && !worst_ang.compare_exchange_weak(w, ang)) {}
        if (val_err > 1e-6 || ang > 1e-4) failures.fetch_add(1);
    });
    r.passed = failures.load() == 0;
    r.detail = fmt("%d/100 cells failed; worst |p-2| %.2e, worst ray angle %.2e", failures.load(),
                   worst_val.load(), worst_ang.load());
    return r;
}

CriterionResult boundary_limit_m1_zero() {
    CriterionResult r{3, "lower-boundary limit at m1 = 0 equals 2 + c1/(2 c2)"};
    double worst = 0.0;
    SearchSettings s;
    for (double ratio : {0.5, 1.0, 2.0}) {
        const auto cfg = two_link(0.0, 1.0, ratio, 1.0);
        const auto cl = critical_load_numeric(cfg, s);
        worst = std::max(worst, std::abs(cl.normalized - (2.0 + 0.5 * ratio)));
    }
    r.passed = worst <= 1e-6;
    r.detail = fmt("worst error %.2e over c1/c2 in {0.5, 1, 2}", worst);
    return r;
}

CriterionResult damped_closed_form() {
    CriterionResult r{4, "damped Ziegler pendulum: numeric Routh-Hurwitz load equals 55/28"};
    const auto cfg = two_link(2, 1, 1, 1, 1, 1, 1);
    SearchSettings s;
    const auto numeric = critical_load_numeric(cfg, s);
    const double want = 55.0 / 28.0;
    const double e_num = std::abs(numeric.value - want);

    // independent specialization of the equal-parameter closed form
    auto special = [](double d1, double d2) {
        return (4 * d1 * d1 + 33 * d1 * d2 + 4 * d2 * d2) / (2 * (6 * d2 + d1) * (d2 + d1)) +
               0.5 * d1 * d2;
    };
    double e_closed = 0.0;
    for (double d1 : {0.3, 1.0, 2.5})
        for (double d2 : {+0.1, 1.0, 4.0}) {
            const auto c = two_link(2, 1, 1, 1, 1, d1, d2);
            e_closed = std::max(e_closed,
                                std::abs(damped_critical_load_m2(c) - special(d1, d2)));
        }
    r.passed = e_num <= 1e-9 && e_closed <= 1e-12;
    r.detail = fmt("numeric error %.2e, closed-vs-special error %.2e", e_num, e_closed);
    return r;
}

CriterionResult destabilization_gap() {
    CriterionResult r{5, "vanishing-damping limits sit below the undamped onset by > 0.1"};
    const auto cfg = two_link(2, 1, 1, 1);
    const double undamped = 3.5 - std::sqrt(2.0);
    double min_gap = 1e300;
    for (double beta : {0.1, 1.0, 10.0})
        min_gap = std::min(min_gap, undamped - zero_damping_limit_m2(cfg, beta));
    r.passed = min_gap > 0.1;
    r.detail = fmt("smallest gap %.6f", min_gap);
    return r;
}

CriterionResult cusp_location() {
    CriterionResult r{6, "triple-eigenvalue cusp of the three-link family"};
    SweepSpec family;
    family.base.link_count = 3;
    family.base.link_length = 1.0;
    family.base.masses = {10.0, 1.0, 1.0};
    family.base.stiffnesses = {1.0, 1.0, 1.0};
    family.base.dampings = {0.0, 0.0, 0.0};
    family.plane_i = 2;
    family.plane_j = 3;
    family.r = 1.0;
    const auto pt = find_triple_root_cusp(family, {0.04, 12.0, -1.35});
    const double ea = std::abs(*pt.alpha - 0.0403477);
    const double ep = std::abs(pt.load - 11.961144);
    const double el = std::abs(pt.lambda.imag() - 1.1635243);
    r.passed = ea <= 1e-4 && ep <= 1e-4 && el <= 1e-4 && pt.jordan_order == 3;
    r.detail = fmt("errors alpha %.2e, P %.2e, |Im lambda| %.2e; jordan order %d", ea, ep, el,
                   pt.jordan_order);
    return r;
}

CriterionResult discriminant_identity() {
    CriterionResult r{7, "first discriminant equals 3 l^12 (m1 m2 m3)^2"};
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> mass(0.05, 3.0), stiff(0.2, 3.0), len(0.5, 2.0),
        load(0.0, 6.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        PendulumConfig cfg;
        cfg.link_count = 3;
        cfg.link_length = len(rng);
        cfg.masses = {mass(rng), mass(rng), mass(rng)};
        cfg.stiffnesses = {stiff(rng), stiff(rng), stiff(rng)};
        cfg.dampings = {0, 0, 0};
        const auto q = to_mu_poly(char_poly(assemble(cfg, load(rng))));
        const double d1 = discriminant_sequence(q).front();
        const double prod = cfg.masses[0] * cfg.masses[1] * cfg.masses[2];
        const double want = 3.0 * std::pow(cfg.link_length, 12) * prod * prod;
        worst = std::max(worst, std::abs(d1 - want) / want);
    }
    r.passed = worst <= 1e-10;
    r.detail = fmt("worst relative error %.2e over 100 random designs", worst);
    return r;
}

CriterionResult oracle_equivalence(int jobs) {
    CriterionResult r{8, "root classification vs discriminant sign and vs max Re lambda"};
    std::atomic<int> disagreements{0}, skipped{0};

    parallel_for(4, std::min(jobs, 4), [&](int block) {
        std::mt19937 rng(100 + block);
        std::uniform_real_distribution<double> mass(0.05, 3.0), stiff(0.2, 3.0), len(0.5, 2.0),
            damp(0.05, 2.0);
        const int m = (block % 2 == 0) ? 2 : 3;
        const bool damped = block >= 2;
        for (int i = 0; i < 2500; ++i) {
            PendulumConfig cfg;
            cfg.link_count = m;
            cfg.link_length = len(rng);
            for (int k = 0; k < m; ++k) {
                cfg.masses.push_back(mass(rng));
                cfg.stiffnesses.push_back(stiff(rng));
                cfg.dampings.push_back(damped ? damp(rng) : 0.0);
            }
            const double unit = cfg.stiffnesses.back() / cfg.link_length;
            std::uniform_real_distribution<double> load(0.0, 8.0 * unit);
            const double P = load(rng);
            const auto rep = classify(cfg, P);
            if (rep.cls == StabilityClass::BOUNDARY) {
                skipped.fetch_add(1);
                continue;
            }
            if (!damped) {
                const auto q = to_mu_poly(char_poly(assemble(cfg, P)));
                const double disc = discriminant_sequence(q).back();
                const bool flutter = rep.cls == StabilityClass::FLUTTER ||
                                     rep.cls == StabilityClass::FLUTTER_AND_DIVERGENCE;
                if (flutter != (disc < 0.0)) disagreements.fetch_add(1);
            } else {
                double max_re = -1e300, scale = 1e-300;
                for (const auto& z : rep.spectrum.roots) {
                    max_re = std::max(max_re, z.real());
                    scale = std::max(scale, std::abs(z));
                }
                if (std::abs(max_re) <= 1e-9 * scale) {
                    skipped.fetch_add(1);
                    continue;
                }
                const bool stable = rep.cls == StabilityClass::ASYMPTOTICALLY_STABLE;
                if (stable != (max_re < 0.0)) disagreements.fetch_add(1);
            }
        }
    });
    r.passed = disagreements.load() == 0;
    r.detail = fmt("%d disagreements, %d inside the boundary band, 10000 samples",
                   disagreements.load(), skipped.load());
    return r;
}

CriterionResult geometry_invariants() {
    CriterionResult r{9, "ruled-surface mass invariance and stiffness-load cone homogeneity"};
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> mass(0.05, 3.0), stiff(0.2, 3.0), len(0.5, 2.0);
    double worst_ruled = 0.0, worst_cone = 0.0;
    int boundary_misses = 0;
    for (int i = 0; i < 100; ++i) {
        const auto cfg = two_link(mass(rng), mass(rng), stiff(rng), stiff(rng), len(rng));
        const auto base_p = undamped_critical_loads_m2(cfg);
        const double p_raw =
            base_p.p_lower * cfg.stiffnesses[1] / cfg.link_length;  // raw onset load
        if (classify(cfg, p_raw).cls != StabilityClass::BOUNDARY) ++boundary_misses;
        for (double t : {0.5, 2.0, 10.0}) {
            auto scaled = cfg;
            scaled.masses[0] *= t;
            scaled.masses[1] *= t;
            const auto p = undamped_critical_loads_m2(scaled);
            worst_ruled = std::max({worst_ruled,
                                    std::abs(p.p_lower - base_p.p_lower) / base_p.p_lower,
                                    std::abs(p.p_upper - base_p.p_upper) / base_p.p_upper});

            auto cone = cfg;
            cone.stiffnesses[0] *= t;
            cone.stiffnesses[1] *= t;
            const double want = t * p_raw;
            const double got =
                undamped_critical_loads_m2(cone).p_lower * cone.stiffnesses[1] / cone.link_length;
            worst_cone = std::max(worst_cone, std::abs(got - want) / want);
            if (classify(cone, want).cls != StabilityClass::BOUNDARY) ++boundary_misses;
        }
    }
    r.passed = worst_ruled <= 1e-9 && worst_cone <= 1e-9 && boundary_misses == 0;
    r.detail = fmt("worst ruled %.2e, worst cone %.2e, boundary misses %d", worst_ruled,
                   worst_cone, boundary_misses);
    return r;
}

CriterionResult figure2_band_structure(const VerifyOptions& opt) {
    CriterionResult r{10, "two-link band diagram: band order, Z point, byte-stable CSV"};
    SweepSpec spec;
    spec.base = two_link(1, 1, 1, 1);
    spec.plane_i = 1;
    spec.plane_j = 2;
    spec.r = 1.0;
    spec.alpha_grid = linspace(0.0, kPi2, 400);
    spec.load_cap = 25.0;
    SearchSettings s;

    const auto result = sweep_azimuth(spec, s, opt.jobs);
    const auto result2 = sweep_azimuth(spec, s, opt.jobs);

    bool bands_ok = true;
    for (const auto& row : result.rows) {
        if (!row.error.empty()) continue;
        for (std::size_t b = 1; b < row.boundaries.size(); ++b)
            bands_ok = bands_ok && row.boundaries[b].load > row.boundaries[b - 1].load;
        if (row.boundaries.size() == 2) {
            bands_ok = bands_ok && row.bands[0] == StabilityClass::MARGINALLY_STABLE &&
                       row.bands[1] == StabilityClass::FLUTTER &&
                       row.bands[2] == StabilityClass::DIVERGENCE;
        }
    }

    // Ziegler's design direction: m1/m2 = 2
    const auto zrow = boundary_row(config_at_alpha(spec, std::atan(0.5)), std::atan(0.5),
                                   spec.load_cap, s);
    const bool z_ok = zrow.boundaries.size() == 2 &&
                      std::abs(zrow.boundaries[0].normalized - (3.5 - std::sqrt(2.0))) <= 1e-9 &&
                      std::abs(zrow.boundaries[1].normalized - (3.5 + std::sqrt(2.0))) <= 1e-9;

    std::ostringstream csv1, csv2;
    write_sweep_csv(result, csv1);
    write_sweep_csv(result2, csv2);
    const bool stable_bytes = csv1.str() == csv2.str();

    bool golden_ok = true;
    std::string golden_note = "no golden dir";
    if (!opt.golden_dir.empty()) {
        const std::string path = opt.golden_dir + "/fig2_sweep.csv";
        if (opt.update_golden) {
            std::ofstream out(path, std::ios::binary);
            out << csv1.str();
            golden_note = "golden updated";
        } else {
            std::ifstream in(path, std::ios::binary);
            if (!in) {
                golden_ok = false;
                golden_note = "golden file missing";
            } else {
                std::ostringstream want;
                want << in.rdbuf();
                golden_ok = want.str() == csv1.str();
                golden_note = golden_ok ? "golden match" : "golden mismatch";
            }
        }
    }

    r.passed = bands_ok && z_ok && stable_bytes && golden_ok;
    r.detail = fmt("bands %s, Z point %s, rerun bytes %s, %s", bands_ok ? "ok" : "BAD",
                   z_ok ? "ok" : "BAD", stable_bytes ? "identical" : "DIFFER",
                   golden_note.c_str());
    return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const VerifyOptions& opt) {
    std::vector<CriterionResult> results;
    auto timed = [&](auto&& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult res = fn();
        res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        results.push_back(std::move(res));
    };
    timed([] { return ziegler_classical_values(); });
    timed([&] { return optimizer_minimum_grid(opt.jobs); });
    timed([] { return boundary_limit_m1_zero(); });
    timed([] { return damped_closed_form(); });
    timed([] { return destabilization_gap(); });
    timed([] { return cusp_location(); });
    timed([] { return discriminant_identity(); });
    timed([&] { return oracle_equivalence(opt.jobs); });
    timed([] { return geometry_invariants(); });
    timed([&] { return figure2_band_structure(opt); });
    return results;
}

int print_results(const std::vector<CriterionResult>& results) {
    int failures = 0;
    for (const auto& r : results) {
        if (!r.passed) ++failures;
        std::printf("%s  criterion %2d: %s (%s) [%.2f s]\n", r.passed ? "PASS" : "FAIL", r.index,
                    r.name.c_str(), r.detail.c_str(), r.seconds);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failures,
                results.size());
    return failures;
}

}  // namespace ziegler::verify
