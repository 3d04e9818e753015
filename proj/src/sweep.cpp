#include "ziegler/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "ziegler/errors.hpp"

namespace ziegler {

namespace {

void check_plane(const PendulumConfig& base, int i, int j) {
    if (i == j) throw std::invalid_argument("sweep plane indices must differ");
    if (i < 1 || j < 1 || i > base.link_count || j > base.link_count)
        throw std::invalid_argument("sweep plane index out of range");
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
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

}  // namespace

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 2) return {lo};
    std::vector<double> v(n);
    for (int k = 0; k < n; ++k) v[k] = lo + (hi - lo) * k / (n - 1);
    return v;
}

PendulumConfig config_at_alpha(const SweepSpec& spec, double alpha) {
    check_plane(spec.base, spec.plane_i, spec.plane_j);
    PendulumConfig cfg = spec.base;
    cfg.masses[spec.plane_i - 1] = spec.r * std::cos(alpha);
    cfg.masses[spec.plane_j - 1] = spec.r * std::sin(alpha);
    // clamp parametrization roundoff at the axes to exact zeros
    for (int idx : {spec.plane_i - 1, spec.plane_j - 1})
        if (std::abs(cfg.masses[idx]) < 1e-15 * spec.r) cfg.masses[idx] = 0.0;
    return cfg;
}

SweepRow boundary_row(const PendulumConfig& cfg, double alpha, double load_cap,
                      const SearchSettings& s) {
    SweepRow row;
    row.alpha = alpha;
    validate(cfg);

    const double unit = cfg.stiffnesses.back() / cfg.link_length;
    const double step = s.scan_step * unit;
    const double cap = load_cap * unit;
    ToleranceSet strict = s.tol;
    strict.boundary_band = 0.0;

    auto klass = [&](double load) { return classify(cfg, load, strict); };

    StabilityReport prev = klass(0.0);
    double prev_load = 0.0;
    row.bands.push_back(prev.cls);
    for (double p = step; p <= cap + 0.5 * step; p += step) {
        StabilityReport cur = klass(p);
        if (cur.cls != prev.cls) {
            double lo = prev_load, hi = p;
            const StabilityClass lo_cls = prev.cls;
            while (hi - lo > s.bisect_tol * unit) {
                const double mid = 0.5 * (lo + hi);
                (klass(mid).cls == lo_cls ? lo : hi) = mid;
            }
            const StabilityReport from = klass(lo);
            const StabilityReport to = klass(hi);
            BoundaryPoint b;
            b.load = 0.5 * (lo + hi);
            b.normalized = b.load / unit;
            b.transition = transition_between(from, to, s.tol);
            b.omega = merging_frequency(to, b.transition, s.tol);
            row.boundaries.push_back(b);
            row.bands.push_back(to.cls);
        }
        prev = std::move(cur);
        prev_load = p;
    }
    return row;
}

SweepResult sweep_azimuth(const SweepSpec& spec, const SearchSettings& s, int jobs) {
    check_plane(spec.base, spec.plane_i, spec.plane_j);
    for (std::size_t k = 0; k + 1 < spec.alpha_grid.size(); ++k)
        if (!(spec.alpha_grid[k] < spec.alpha_grid[k + 1]))
            throw std::invalid_argument("alpha grid must be strictly increasing");
    if (!spec.alpha_grid.empty() &&
        (spec.alpha_grid.front() < 0.0 || spec.alpha_grid.back() > M_PI / 2 + 1e-12))
        throw std::invalid_argument("alpha grid must lie within [0, pi/2]");

    SweepResult result;
    result.spec = spec;
    result.settings = s;
    result.rows.resize(spec.alpha_grid.size());
    run_indexed(static_cast<int>(spec.alpha_grid.size()), jobs, [&](int k) {
        const double alpha = spec.alpha_grid[k];
        try {
            result.rows[k] = boundary_row(config_at_alpha(spec, alpha), alpha, spec.load_cap, s);
        } catch (const std::exception& e) {
            result.rows[k].alpha = alpha;
            result.rows[k].error = e.what();
        }
    });
    return result;
}

GridResult classify_grid(const GridSpec& spec, const ToleranceSet& tol, int jobs) {
    check_plane(spec.base, spec.plane_i, spec.plane_j);
    if (spec.axis_steps < 1 || spec.load_steps < 1)
        throw std::invalid_argument("grid resolution must be positive");

    GridResult result;
    result.spec = spec;
    result.cells.assign(static_cast<std::size_t>(spec.axis_steps) * spec.load_steps,
                        StabilityClass::BOUNDARY);
    result.errors.assign(spec.axis_steps, "");

    const auto axis = linspace(spec.axis_min, spec.axis_max, spec.axis_steps);
    const auto loads = linspace(spec.load_min, spec.load_max, spec.load_steps);
    run_indexed(spec.axis_steps, jobs, [&](int i) {
        SweepSpec family;
        family.base = spec.base;
        family.plane_i = spec.plane_i;
        family.plane_j = spec.plane_j;
        const double alpha = spec.axis_is_alpha ? axis[i] : spec.fixed;
        family.r = spec.axis_is_alpha ? spec.fixed : axis[i];
        try {
            const PendulumConfig cfg = config_at_alpha(family, alpha);
            const double unit = cfg.stiffnesses.back() / cfg.link_length;
            for (int k = 0; k < spec.load_steps; ++k)
                result.cells[static_cast<std::size_t>(i) * spec.load_steps + k] =
                    classify(cfg, loads[k] * unit, tol).cls;
        } catch (const std::exception& e) {
            result.errors[i] = e.what();
        }
    });
    return result;
}

void write_sweep_csv(const SweepResult& result, std::ostream& out) {
    out << "alpha,r,boundary_index,load_P,load_p_normalized,transition,omega\n";
    for (const auto& row : result.rows) {
        if (!row.error.empty()) continue;
        for (std::size_t b = 0; b < row.boundaries.size(); ++b) {
            const auto& pt = row.boundaries[b];
            out << format_g17(row.alpha) << ',' << format_g17(result.spec.r) << ',' << b << ','
                << format_g17(pt.load) << ',' << format_g17(pt.normalized) << ','
                << to_string(pt.transition) << ',' << format_g17(pt.omega) << '\n';
        }
    }
}

void write_grid_csv(const GridResult& result, std::ostream& out) {
    const auto axis = linspace(result.spec.axis_min, result.spec.axis_max, result.spec.axis_steps);
    const auto loads = linspace(result.spec.load_min, result.spec.load_max, result.spec.load_steps);
    out << (result.spec.axis_is_alpha ? "alpha" : "r") << ",load_p_normalized,class\n";
    for (int i = 0; i < result.spec.axis_steps; ++i) {
        if (!result.errors[i].empty()) continue;
        for (int k = 0; k < result.spec.load_steps; ++k)
            out << format_g17(axis[i]) << ',' << format_g17(loads[k]) << ','
                << to_string(result.cells[static_cast<std::size_t>(i) * result.spec.load_steps + k])
                << '\n';
    }
}

}  // namespace ziegler
