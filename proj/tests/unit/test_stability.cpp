#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "ziegler/stability.hpp"

using namespace ziegler;

namespace {

MuPoly mu_of(const PendulumConfig& cfg, double load) {
    return to_mu_poly(char_poly(assemble(cfg, load)));
}

MuPoly raw_mu(std::vector<double> coeffs) {
    MuPoly q;
    q.link_count = static_cast<int>(coeffs.size()) - 1;
    q.coeffs = std::move(coeffs);
    q.effective_degree = q.link_count;
    return q;
}

}  // namespace

TEST_CASE("discrimination matrix rows follow the interleaved shift pattern") {
    const auto q = raw_mu({1.0, 2.0, 3.0, 4.0});  // cubic
    const auto s = discrimination_matrix(q).entries;
    REQUIRE(s.rows() == 6);
    // first two rows
    const double want0[] = {1, 2, 3, 4, 0, 0};
    const double want1[] = {0, 3, 4, 3, 0, 0};  // 3a0, 2a1, a2
    for (int j = 0; j < 6; ++j) {
        CHECK(s(0, j) == want0[j]);
        CHECK(s(1, j) == want1[j]);
    }
    // shifted copies
    for (int j = 0; j < 4; ++j) {
        CHECK(s(2, j + 1) == s(0, j));
        CHECK(s(4, j + 2) == s(0, j));
        CHECK(s(3, j + 1) == s(1, j));
        CHECK(s(5, j + 2) == s(1, j));
    }
}

TEST_CASE("discriminant sequence of a quadratic is the scaled discriminant") {
    const auto d = discriminant_sequence(raw_mu({2.0, 3.0, 1.0}));
    REQUIRE(d.size() == 2);
    // Delta_2 = a0^2 (a1^2 - 4 a0 a2) = 4 * 1
    CHECK(d[1] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(d[1] > 0.0);

    const auto dd = discriminant_sequence(raw_mu({1.0, 2.0, 1.0}));  // (mu+1)^2
    CHECK(dd[1] == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("linear polynomial has the 2x2 matrix with Delta_1 = a0^2") {
    const auto d = discriminant_sequence(raw_mu({3.0, 5.0}));
    REQUIRE(d.size() == 1);
    CHECK(d[0] == doctest::Approx(9.0));
}

TEST_CASE("three-link first discriminant identity") {
    std::mt19937 rng(71);
    for (int i = 0; i < 50; ++i) {
        const auto cfg = ztest::random_config(rng, 3, false);
        const auto d = discriminant_sequence(mu_of(cfg, 1.1));
        const double prod = cfg.masses[0] * cfg.masses[1] * cfg.masses[2];
        const double want = 3.0 * std::pow(cfg.link_length, 12) * prod * prod;
        CHECK(d[0] == doctest::Approx(want).epsilon(1e-10));
        CHECK(d[0] > 0.0);
    }
}

TEST_CASE("Ziegler design classification bands") {
    const auto cfg = ztest::ziegler_classic();
    CHECK(classify_undamped(mu_of(cfg, 2.0)).cls == StabilityClass::MARGINALLY_STABLE);
    CHECK(classify_undamped(mu_of(cfg, 3.0)).cls == StabilityClass::FLUTTER);
    CHECK(classify_undamped(mu_of(cfg, 5.0)).cls == StabilityClass::DIVERGENCE);

    // across the flutter onset
    const double pstar = 3.5 - std::sqrt(2.0);
    CHECK(classify(cfg, pstar - 1e-6).cls == StabilityClass::MARGINALLY_STABLE);
    CHECK(classify(cfg, pstar + 1e-6).cls == StabilityClass::FLUTTER);
    CHECK(classify(cfg, pstar).cls == StabilityClass::BOUNDARY);
}

TEST_CASE("stability condition: positive final discriminant implies positive middle one") {
    // sampled check of the m=3 claim
    std::mt19937 rng(73);
    std::uniform_real_distribution<double> load(0.0, 8.0);
    int seen = 0;
    for (int i = 0; i < 3000; ++i) {
        const auto cfg = ztest::random_config(rng, 3, false);
        const auto q = mu_of(cfg, load(rng) * cfg.stiffnesses[2] / cfg.link_length);
        const auto rep = classify_undamped(q);
        if (rep.cls != StabilityClass::MARGINALLY_STABLE) continue;
        const auto d = discriminant_sequence(q);
        if (d[2] > 0.0) {
            CHECK(d[1] > 0.0);
            ++seen;
        }
    }
    CHECK(seen > 100);
}

TEST_CASE("damped Ziegler crosses at the closed-form load") {
    const auto cfg = ztest::make2(2, 1, 1, 1, 1, 1, 1);
    CHECK(classify(cfg, 1.0).cls == StabilityClass::ASYMPTOTICALLY_STABLE);
    CHECK(classify(cfg, 3.0).cls == StabilityClass::UNSTABLE_DAMPED);
    const double pstar = 55.0 / 28.0;
    CHECK(classify(cfg, pstar - 1e-6).cls == StabilityClass::ASYMPTOTICALLY_STABLE);
    CHECK(classify(cfg, pstar + 1e-6).cls == StabilityClass::UNSTABLE_DAMPED);
    CHECK(classify(cfg, pstar).cls == StabilityClass::BOUNDARY);
}

TEST_CASE("conservative damped system is asymptotically stable") {
    std::mt19937 rng(79);
    for (int i = 0; i < 50; ++i) {
        const auto cfg = ztest::random_config(rng, 2 + i % 3, true);
        CHECK(classify(cfg, 0.0).cls == StabilityClass::ASYMPTOTICALLY_STABLE);
    }
}

TEST_CASE("hurwitz_classify rejects undamped polynomials") {
    const auto p = char_poly(assemble(ztest::ziegler_classic(), 1.0));
    CHECK_THROWS_AS(hurwitz_classify(p), std::invalid_argument);
}

TEST_CASE("zero free-end mass classifies from the deflated polynomial") {
    // single remaining root: marginal below the escape load, divergence above
    const auto cfg = ztest::make2(0.0, 1.0, 1.0, 1.0);
    const auto low = classify(cfg, 2.0);
    CHECK(low.cls == StabilityClass::MARGINALLY_STABLE);
    CHECK(low.infinite_count == 1);
    CHECK(classify(cfg, 3.0).cls == StabilityClass::DIVERGENCE);
}

TEST_CASE("boundary distance shrinks toward the onset") {
    const auto cfg = ztest::ziegler_classic();
    const double pstar = 3.5 - std::sqrt(2.0);
    const double far = classify(cfg, 1.0).boundary_distance;
    const double near = classify(cfg, pstar - 1e-5).boundary_distance;
    CHECK(near < far);
    CHECK(classify(cfg, pstar - 1e-5).cls == StabilityClass::MARGINALLY_STABLE);
}

TEST_CASE("undamped root classes agree with the discriminant sign away from the band") {
    std::mt19937 rng(83);
    for (int i = 0; i < 3000; ++i) {
        const int m = 2 + i % 2;
        const auto cfg = ztest::random_config(rng, m, false);
        std::uniform_real_distribution<double> load(0.0,
                                                    8.0 * cfg.stiffnesses.back() / cfg.link_length);
        const auto q = mu_of(cfg, load(rng));
        const auto rep = classify_undamped(q);
        if (rep.cls == StabilityClass::BOUNDARY) continue;
        const bool flutter = rep.cls == StabilityClass::FLUTTER ||
                             rep.cls == StabilityClass::FLUTTER_AND_DIVERGENCE;
        CHECK(flutter == (rep.discriminants.back() < 0.0));
    }
}
