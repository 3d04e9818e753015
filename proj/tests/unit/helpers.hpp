#pragma once

#include <random>
#include <vector>

#include "ziegler/model.hpp"

namespace ztest {

inline ziegler::PendulumConfig make2(double m1, double m2, double c1, double c2, double l = 1.0,
                                     double d1 = 0.0, double d2 = 0.0) {
    ziegler::PendulumConfig cfg;
    cfg.link_count = 2;
    cfg.link_length = l;
    cfg.masses = {m1, m2};
    cfg.stiffnesses = {c1, c2};
    cfg.dampings = {d1, d2};
    return cfg;
}

inline ziegler::PendulumConfig ziegler_classic() { return make2(2.0, 1.0, 1.0, 1.0); }

inline ziegler::PendulumConfig make_m(int m, const std::vector<double>& masses,
                                      const std::vector<double>& cs, double l = 1.0,
                                      std::vector<double> ds = {}) {
    ziegler::PendulumConfig cfg;
    cfg.link_count = m;
    cfg.link_length = l;
    cfg.masses = masses;
    cfg.stiffnesses = cs;
    cfg.dampings = std::move(ds);
    return cfg;
}

inline ziegler::PendulumConfig random_config(std::mt19937& rng, int m, bool damped,
                                             double mass_lo = 0.05, double mass_hi = 3.0) {
    std::uniform_real_distribution<double> mass(mass_lo, mass_hi);
    std::uniform_real_distribution<double> stiff(0.2, 3.0);
    std::uniform_real_distribution<double> damp(0.05, 2.0);
    std::uniform_real_distribution<double> len(0.5, 2.0);
    ziegler::PendulumConfig cfg;
    cfg.link_count = m;
    cfg.link_length = len(rng);
    for (int i = 0; i < m; ++i) {
        cfg.masses.push_back(mass(rng));
        cfg.stiffnesses.push_back(stiff(rng));
        cfg.dampings.push_back(damped ? damp(rng) : 0.0);
    }
    return cfg;
}

}  // namespace ztest
