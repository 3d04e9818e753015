#include <doctest.h>

#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "ziegler/model.hpp"

using namespace ziegler;

TEST_CASE("two-link assembly matches the hand-substituted matrices") {
    const auto t = assemble(ztest::make2(2.0, 1.0, 1.0, 1.0), 2.0);
    CHECK(t.M(0, 0) == doctest::Approx(3.0));
    CHECK(t.M(0, 1) == doctest::Approx(1.0));
    CHECK(t.M(1, 0) == doctest::Approx(1.0));
    CHECK(t.M(1, 1) == doctest::Approx(1.0));
    CHECK(t.K(0, 0) == doctest::Approx(0.0));
    CHECK(t.K(0, 1) == doctest::Approx(1.0));
    CHECK(t.K(1, 0) == doctest::Approx(-1.0));
    CHECK(t.K(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("K is symmetric exactly at zero load") {
    std::mt19937 rng(7);
    for (int i = 0; i < 50; ++i) {
        const auto cfg = ztest::random_config(rng, 2 + i % 3, false);
        const auto t = assemble(cfg, 0.0);
        CHECK((t.K - t.K.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("three-link mass matrix entries at the azimuth example") {
    const double a = M_PI / 4.0;
    const auto cfg = ztest::make_m(3, {10.0, std::cos(a), std::sin(a)}, {1.0, 1.0, 1.0});
    const auto t = assemble(cfg, 0.0);
    CHECK(t.M(0, 0) == doctest::Approx(10.0 + std::sqrt(2.0)).epsilon(1e-14));
    CHECK(t.M(1, 2) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(t.M(2, 2) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
}

TEST_CASE("mass determinant identity") {
    CHECK(mass_determinant(ztest::make2(2.0, 1.0, 1.0, 1.0)) == doctest::Approx(2.0));
    CHECK(mass_determinant(ztest::make2(2.0, 0.0, 1.0, 1.0)) == 0.0);
    CHECK(mass_determinant(ztest::make_m(3, {1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, 2.0)) ==
          doctest::Approx(64.0));

    std::mt19937 rng(11);
    for (int i = 0; i < 100; ++i) {
        const auto cfg = ztest::random_config(rng, 2 + i % 4, false);
        const auto t = assemble(cfg, 0.0);
        const double det = t.M.determinant();
        CHECK(det == doctest::Approx(mass_determinant(cfg)).epsilon(1e-12));
    }
}

TEST_CASE("follower part of K is affine in P with low rank") {
    std::mt19937 rng(3);
    for (int i = 0; i < 30; ++i) {
        const int m = 2 + i % 2;
        const auto cfg = ztest::random_config(rng, m, false);
        const auto k0 = assemble(cfg, 0.0).K;
        const auto k1 = assemble(cfg, 1.7).K;
        const auto k2 = assemble(cfg, 3.4).K;
        // affine: K(2P) - K(0) == 2 (K(P) - K(0))
        CHECK(((k2 - k0) - 2.0 * (k1 - k0)).cwiseAbs().maxCoeff() < 1e-12);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(k1 - k0);
        int rank = 0;
        for (int j = 0; j < svd.singularValues().size(); ++j)
            if (svd.singularValues()[j] > 1e-12) ++rank;
        CHECK(rank <= 2);
    }
}

TEST_CASE("m=2 assembly matches the closed matrices for random configs") {
    std::mt19937 rng(5);
    for (int i = 0; i < 100; ++i) {
        const auto cfg = ztest::random_config(rng, 2, true);
        std::uniform_real_distribution<double> load(-3.0, 3.0);
        const double p = load(rng);
        const auto t = assemble(cfg, p);
        const double l = cfg.link_length;
        const double m1 = cfg.masses[0], m2 = cfg.masses[1];
        const double c1 = cfg.stiffnesses[0], c2 = cfg.stiffnesses[1];
        const double d1 = cfg.dampings[0], d2 = cfg.dampings[1];
        CHECK(t.M(0, 0) == doctest::Approx(l * l * (m1 + m2)).epsilon(1e-15));
        CHECK(t.M(0, 1) == doctest::Approx(l * l * m2).epsilon(1e-15));
        CHECK(t.K(0, 0) == doctest::Approx(c1 + c2 - p * l).epsilon(1e-15));
        CHECK(t.K(0, 1) == doctest::Approx(p * l - c2).epsilon(1e-15));
        CHECK(t.K(1, 0) == doctest::Approx(-c2).epsilon(1e-15));
        CHECK(t.K(1, 1) == doctest::Approx(c2).epsilon(1e-15));
        CHECK(t.D(0, 0) == doctest::Approx(d1 + d2).epsilon(1e-15));
        CHECK(t.D(0, 1) == doctest::Approx(-d2).epsilon(1e-15));
        CHECK(t.D(1, 1) == doctest::Approx(d2).epsilon(1e-15));
    }
}

TEST_CASE("config validation rejects bad input") {
    auto cfg = ztest::ziegler_classic();
    cfg.link_count = 1;
    cfg.masses = {1.0};
    cfg.stiffnesses = {1.0};
    cfg.dampings = {0.0};
    CHECK_THROWS_AS(validate(cfg), ConfigError);

    cfg = ztest::ziegler_classic();
    cfg.stiffnesses[1] = 0.0;
    CHECK_THROWS_AS(assemble(cfg, 1.0), ConfigError);

    cfg = ztest::ziegler_classic();
    cfg.masses = {0.0, 0.0};
    CHECK_THROWS_AS(assemble(cfg, 1.0), ConfigError);

    cfg = ztest::ziegler_classic();
    CHECK_THROWS_AS(assemble(cfg, std::nan("")), ConfigError);
}
