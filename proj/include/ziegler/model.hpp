#pragma once

#include <Eigen/Core>
#include <vector>

#include "ziegler/errors.hpp"

namespace ziegler {

/// Physical description of an m-link articulated pendulum under a
/// tangential follower load at the free end.
///
/// Joints are numbered from the base upward. masses[i] is the point mass
/// carried at the tip of link i+1 (masses.back() sits at the free end);
/// stiffnesses[i] and dampings[i] belong to joint i+1, with index 0 at the
/// base joint. This ordering matches the row order of the assembled
/// matrices; mixing it up transposes the model, so it is validated and
/// documented here once.
struct PendulumConfig {
    int link_count = 2;
    double link_length = 1.0;
    std::vector<double> masses;       ///< >= 0, at least one > 0
    std::vector<double> stiffnesses;  ///< all > 0
    std::vector<double> dampings;     ///< >= 0; empty or all-zero = undamped

    bool undamped() const {
        for (double d : dampings)
            if (d != 0.0) return false;
        return true;
    }
    double damping_at(int i) const { return dampings.empty() ? 0.0 : dampings[i]; }
};

/// Throws ConfigError unless the config satisfies all invariants:
/// link_count >= 2, positive link length and stiffnesses, non-negative
/// masses and dampings, at least one positive mass, finite values, list
/// sizes equal to link_count (dampings may be empty).
void validate(const PendulumConfig& cfg);

/// Mass, damping and positional-force matrices of the linearized model at
/// a given follower load. K is non-symmetric whenever load != 0.
struct MatrixTriple {
    Eigen::MatrixXd M;
    Eigen::MatrixXd D;
    Eigen::MatrixXd K;
    double load = 0.0;
};

/// Assembles the linearized equations of motion.
///
/// M[i][j] = l^2 * sum of masses from index max(i,j) upward. K carries the
/// joint stiffness coupling on the tridiagonal plus the follower-load
/// terms: -P*l on the first m-1 diagonal entries and +P*l in the last
/// column of those rows. D is the symmetric tridiagonal damping analogue
/// of the stiffness coupling.
MatrixTriple assemble(const PendulumConfig& cfg, double load);

/// det M = l^(2m) * product of all masses, evaluated directly from the
/// config (cheap independent cross-check of the assembled mass matrix).
double mass_determinant(const PendulumConfig& cfg);

}  // namespace ziegler
