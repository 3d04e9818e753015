#include "ziegler/critload.hpp"

#include <cmath>
#include <limits>

#include "ziegler/errors.hpp"

namespace ziegler {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_m2(const PendulumConfig& cfg, const char* who, bool need_undamped) {
    validate(cfg);
    if (cfg.link_count != 2) throw std::invalid_argument(std::string(who) + ": requires m == 2");
    if (need_undamped && !cfg.undamped())
        throw std::invalid_argument(std::string(who) + ": requires an undamped config");
}

}  // namespace

const char* to_string(Transition t) {
    switch (t) {
        case Transition::FLUTTER_ONSET: return "FLUTTER_ONSET";
        case Transition::FLUTTER_TO_DIVERGENCE: return "FLUTTER_TO_DIVERGENCE";
        case Transition::DIVERGENCE_ONSET: return "DIVERGENCE_ONSET";
        case Transition::RESTABILIZATION: return "RESTABILIZATION";
        case Transition::UNBOUNDED: return "UNBOUNDED";
        case Transition::OTHER: return "OTHER";
    }
    return "?";
}

ClosedFormLoadsM2 undamped_critical_loads_m2(const PendulumConfig& cfg) {
    require_m2(cfg, "undamped_critical_loads_m2", true);
    const double m1 = cfg.masses[0], m2 = cfg.masses[1];
    const double c1 = cfg.stiffnesses[0], c2 = cfg.stiffnesses[1];
    if (m2 <= 0.0) throw InfiniteLoad("free-end mass is zero; critical load grows without bound");
    const double x = std::sqrt(m1 / m2), y = std::sqrt(c1 / c2);
    return {2.0 + 0.5 * (x - y) * (x - y), 2.0 + 0.5 * (x + y) * (x + y)};
}

double damped_critical_load_m2(const PendulumConfig& cfg) {
    require_m2(cfg, "damped_critical_load_m2", false);
    const double m1 = cfg.masses[0], m2 = cfg.masses[1];
    const double c1 = cfg.stiffnesses[0], c2 = cfg.stiffnesses[1];
    const double d1 = cfg.damping_at(0), d2 = cfg.damping_at(1);
    const double l = cfg.link_length;

    const double factor_m = 4.0 * m2 * d2 + d1 * m2 + m1 * d2;
    const double factor_c = c1 * d2 + d1 * c2;
    const double den = 2.0 * m2 * l * factor_m * factor_c;
    if (m2 <= 0.0 || factor_m <= 0.0 || factor_c <= 0.0)
        throw DegenerateDamping("damped closed form denominator vanishes");

    const double diff = c1 * m2 - m1 * c2;
    const double num = 4.0 * m2 * m2 * (d2 * d2 * c1 * c1 + d1 * d1 * c2 * c2) +
                       d1 * d2 * (8.0 * m2 * (m1 + 2.0 * m2) * c2 * c2 + diff * diff);
    return num / den + 0.5 * d1 * d2 / (m2 * l * l * l);
}

double zero_damping_limit_m2(const PendulumConfig& cfg, double beta) {
    require_m2(cfg, "zero_damping_limit_m2", false);
    if (!(beta >= 0.0)) throw std::invalid_argument("zero_damping_limit_m2: beta must be >= 0");
    const double m1 = cfg.masses[0], m2 = cfg.masses[1];
    const double c1 = cfg.stiffnesses[0], c2 = cfg.stiffnesses[1];
    const double l = cfg.link_length;
    if (m2 <= 0.0) throw DegenerateDamping("zero free-end mass");

    // Leading order of the closed form with d1 = beta*d2, d2 -> 0; the
    // d1*d2 tail term drops out.
    const double diff = c1 * m2 - m1 * c2;
    const double num = 4.0 * m2 * m2 * (c1 * c1 + beta * beta * c2 * c2) +
                       beta * (8.0 * m2 * (m1 + 2.0 * m2) * c2 * c2 + diff * diff);
    const double den = 2.0 * m2 * l * (4.0 * m2 + beta * m2 + m1) * (c1 + beta * c2);
    return num / den;
}

Transition transition_between(const StabilityReport& from, const StabilityReport& to,
                              const ToleranceSet& tol) {
    using C = StabilityClass;
    if (is_strictly_stable(to)) return Transition::RESTABILIZATION;
    const bool from_stable = is_strictly_stable(from);

    if (to.cls == C::UNSTABLE_DAMPED) {
        // Read the mechanism off the crossing eigenvalue.
        double best_re = -kInf, im = 0.0;
        for (const auto& z : to.spectrum.roots)
            if (z.real() > best_re) {
                best_re = z.real();
                im = std::abs(z.imag());
            }
        const double az = std::max(std::abs(std::complex<double>(best_re, im)), 1e-300);
        return (im > tol.imag_axis * az) ? Transition::FLUTTER_ONSET : Transition::DIVERGENCE_ONSET;
    }

    const bool to_flutter = to.cls == C::FLUTTER || to.cls == C::FLUTTER_AND_DIVERGENCE;
    const bool to_div = to.cls == C::DIVERGENCE || to.cls == C::FLUTTER_AND_DIVERGENCE;
    if (from_stable && to_flutter) return Transition::FLUTTER_ONSET;
    if (from_stable && to_div) return Transition::DIVERGENCE_ONSET;
    if (from.cls == C::FLUTTER && to_div) return Transition::FLUTTER_TO_DIVERGENCE;
    if (from.cls == C::DIVERGENCE && to_flutter) return Transition::FLUTTER_ONSET;
    if (from.cls == C::FLUTTER_AND_DIVERGENCE && to.cls == C::DIVERGENCE)
        return Transition::FLUTTER_TO_DIVERGENCE;
    return Transition::OTHER;
}

double merging_frequency(const StabilityReport& unstable_side, Transition t,
                         const ToleranceSet& tol) {
    if (t == Transition::FLUTTER_ONSET || t == Transition::OTHER) {
        if (unstable_side.spectrum_in_mu) {
            // The just-coalesced pair: non-real mu with the smallest
            // relative imaginary part; omega^2 = -Re mu.
            double best = kInf, re = 0.0;
            for (const auto& z : unstable_side.spectrum.roots) {
                const double az = std::max(std::abs(z), 1e-300);
                const double q = std::abs(z.imag()) / az;
                if (q > tol.imag_axis && q < best) {
                    best = q;
                    re = z.real();
                }
            }
            if (best < kInf && re < 0.0) return std::sqrt(-re);
            return 0.0;
        }
        double best_re = -kInf, im = 0.0;
        for (const auto& z : unstable_side.spectrum.roots)
            if (z.real() > best_re) {
                best_re = z.real();
                im = std::abs(z.imag());
            }
        return im;
    }
    return 0.0;
}

CriticalLoad critical_load_numeric(const PendulumConfig& cfg, const SearchSettings& s) {
    validate(cfg);
    if (!(s.p_max > s.scan_step) || !(s.scan_step > 0.0) || !(s.bisect_tol > 0.0))
        throw std::invalid_argument("critical_load_numeric: bad search settings");

    const double unit = cfg.stiffnesses.back() / cfg.link_length;
    ToleranceSet strict = s.tol;
    strict.boundary_band = 0.0;

    auto stable_at = [&](double load) { return is_strictly_stable(classify(cfg, load, strict)); };

    if (!stable_at(0.0))
        throw UnstableAtZeroLoad("configuration is not strictly stable at zero load");

    const double step = s.scan_step * unit;
    const double cap = s.p_max * unit;
    double lo = 0.0, hi = 0.0;
    bool found = false;
    for (double p = step; p <= cap + 0.5 * step; p += step) {
        if (!stable_at(p)) {
            hi = std::min(p, cap);
            lo = hi - step;
            found = true;
            break;
        }
    }
    if (!found) {
        CriticalLoad r;
        r.value = kInf;
        r.normalized = kInf;
        r.transition = Transition::UNBOUNDED;
        return r;
    }

    while (hi - lo > s.bisect_tol * unit) {
        const double mid = 0.5 * (lo + hi);
        (stable_at(mid) ? lo : hi) = mid;
    }

    CriticalLoad r;
    r.value = 0.5 * (lo + hi);
    r.normalized = r.value / unit;
    const StabilityReport from = classify(cfg, lo, strict);
    const StabilityReport to = classify(cfg, hi, strict);
    r.transition = transition_between(from, to, s.tol);
    r.critical_frequency = merging_frequency(to, r.transition, s.tol);
    return r;
}

}  // namespace ziegler
