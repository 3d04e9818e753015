#include "ziegler/model.hpp"

#include <cmath>

namespace ziegler {

void validate(const PendulumConfig& cfg) {
    const int m = cfg.link_count;
    if (m < 2) throw ConfigError("link_count must be at least 2");
    if (!(cfg.link_length > 0.0) || !std::isfinite(cfg.link_length))
        throw ConfigError("link_length must be positive and finite");
    if (static_cast<int>(cfg.masses.size()) != m)
        throw ConfigError("masses must have link_count entries");
    if (static_cast<int>(cfg.stiffnesses.size()) != m)
        throw ConfigError("stiffnesses must have link_count entries");
    if (!cfg.dampings.empty() && static_cast<int>(cfg.dampings.size()) != m)
        throw ConfigError("dampings must be empty or have link_count entries");

    bool any_mass = false;
    for (double v : cfg.masses) {
        if (!std::isfinite(v) || v < 0.0) throw ConfigError("masses must be finite and >= 0");
        any_mass = any_mass || v > 0.0;
    }
    if (!any_mass) throw ConfigError("at least one mass must be positive");
    for (double v : cfg.stiffnesses)
        if (!std::isfinite(v) || v <= 0.0) throw ConfigError("stiffnesses must be finite and > 0");
    for (double v : cfg.dampings)
        if (!std::isfinite(v) || v < 0.0) throw ConfigError("dampings must be finite and >= 0");
}

MatrixTriple assemble(const PendulumConfig& cfg, double load) {
    validate(cfg);
    if (!std::isfinite(load)) throw ConfigError("load must be finite");

    const int m = cfg.link_count;
    const double l = cfg.link_length;
    Eigen::MatrixXd M(m, m);
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(m, m);
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(m, m);

    // tail[i] = sum of masses with index >= i
    std::vector<double> tail(m + 1, 0.0);
    for (int i = m - 1; i >= 0; --i) tail[i] = tail[i + 1] + cfg.masses[i];
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) M(i, j) = l * l * tail[std::max(i, j)];

    const auto& c = cfg.stiffnesses;
    for (int i = 0; i < m; ++i) {
        const double c_next = (i + 1 < m) ? c[i + 1] : 0.0;
        const double d_next = (i + 1 < m) ? cfg.damping_at(i + 1) : 0.0;
        K(i, i) = c[i] + c_next;
        D(i, i) = cfg.damping_at(i) + d_next;
        if (i + 1 < m) {
            K(i, i + 1) = -c_next;
            K(i + 1, i) = -c_next;
            D(i, i + 1) = -d_next;
            D(i + 1, i) = -d_next;
        }
        if (i < m - 1) {
            // Follower load: every row but the last gets -P*l on the
            // diagonal and +P*l in the free-end column.
            K(i, i) -= load * l;
            K(i, m - 1) += load * l;
        }
    }
    return {std::move(M), std::move(D), std::move(K), load};
}

double mass_determinant(const PendulumConfig& cfg) {
    validate(cfg);
    long double acc = 1.0L;
    for (double v : cfg.masses) acc *= v;
    for (int i = 0; i < 2 * cfg.link_count; ++i) acc *= cfg.link_length;
    return static_cast<double>(acc);
}

}  // namespace ziegler
