#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "ziegler/errors.hpp"
#include "ziegler/singular.hpp"

using namespace ziegler;

namespace {

SweepSpec cusp_family(double m1, double r) {
    SweepSpec family;
    family.base = ztest::make_m(3, {m1, 1.0, 1.0}, {1.0, 1.0, 1.0});
    family.plane_i = 2;
    family.plane_j = 3;
    family.r = r;
    family.load_cap = 25.0;
    return family;
}

}  // namespace

TEST_CASE("jordan order on manufactured roots") {
    MuPoly sq;  // (mu + 1)^2
    sq.link_count = 2;
    sq.coeffs = {1.0, 2.0, 1.0};
    sq.effective_degree = 2;
    CHECK(jordan_order_at(sq, {-1.0, 0.0}) == 2);
    CHECK_THROWS_AS(jordan_order_at(sq, {3.0, 0.0}, 1e-8), NotARoot);

    MuPoly cu;  // (mu + 1)^3
    cu.link_count = 3;
    cu.coeffs = {1.0, 3.0, 3.0, 1.0};
    cu.effective_degree = 3;
    CHECK(jordan_order_at(cu, {-1.0, 0.0}, 1e-5) == 3);
}

TEST_CASE("flutter onset of the classical design is a second-order root") {
    const double pstar = 3.5 - std::sqrt(2.0);
    const auto q = to_mu_poly(char_poly(assemble(ztest::ziegler_classic(), pstar)));
    CHECK(jordan_order_at(q, {-std::sqrt(0.5), 0.0}, 1e-5) == 2);
}

TEST_CASE("triple-eigenvalue cusp of the m1=10 family matches the published point") {
    const auto pt = find_triple_root_cusp(cusp_family(10.0, 1.0), {0.04, 12.0, -1.35});
    CHECK(*pt.alpha == doctest::Approx(0.0403477).epsilon(1e-4));
    CHECK(pt.load == doctest::Approx(11.961144).epsilon(1e-4));
    CHECK(pt.lambda.imag() == doctest::Approx(1.1635243).epsilon(1e-4));
    CHECK(pt.jordan_order == 3);
    for (double r : pt.residuals) CHECK(r < 1e-9);
}

TEST_CASE("cusp solve is stable to 20 percent guess perturbations") {
    const auto ref = find_triple_root_cusp(cusp_family(10.0, 1.0), {0.04, 12.0, -1.35});
    for (double fa : {0.8, 1.2})
        for (double fp : {0.8, 1.2}) {
            const auto pt = find_triple_root_cusp(cusp_family(10.0, 1.0),
                                                  {0.04 * fa, 12.0 * fp, -1.35 * fa});
            CHECK(*pt.alpha == doctest::Approx(*ref.alpha).epsilon(1e-8));
            CHECK(pt.load == doctest::Approx(ref.load).epsilon(1e-8));
        }
}

TEST_CASE("manufactured triple root is recovered") {
    // family with a known triple root: perturb the cusp family slightly
    // and let Newton pull the parameters back to the certified point.
    const auto ref = find_triple_root_cusp(cusp_family(10.0, 1.0), {0.04, 12.0, -1.35});
    const auto again = find_triple_root_cusp(
        cusp_family(10.0, 1.0), {*ref.alpha * 1.05, ref.load * 0.97, ref.mu.real() * 1.1});
    CHECK(again.load == doctest::Approx(ref.load).epsilon(1e-10));
}

TEST_CASE("cusp boundary branches meet with blowing slope") {
    const auto pt = find_triple_root_cusp(cusp_family(10.0, 1.0), {0.04, 12.0, -1.35});
    SearchSettings s;
    s.scan_step = 0.02;
    auto family = cusp_family(10.0, 1.0);
    // one-sided finite differences of the first boundary toward the cusp
    auto first_boundary = [&](double alpha) {
        const auto row = boundary_row(config_at_alpha(family, alpha), alpha, 25.0, s);
        REQUIRE(!row.boundaries.empty());
        // boundary branch through the cusp is the last one before divergence
        return row.boundaries[0].load;
    };
    const double a = *pt.alpha;
    const double s3 = std::abs(first_boundary(a - 1e-3) - first_boundary(a - 2e-3)) / 1e-3;
    const double s4 = std::abs(first_boundary(a - 1e-4) - first_boundary(a - 2e-4)) / 1e-4;
    CHECK(s4 > 2.0 * s3);  // slope keeps growing toward the cusp
}

TEST_CASE("no-convergence paths throw") {
    CHECK_THROWS_AS(find_triple_root_cusp(cusp_family(10.0, 1.0), {1.2, 2.0, -0.2}),
                    std::runtime_error);
}

TEST_CASE("multistart finds the single cusp of the m1=10 family") {
    const auto pts = find_cusps_multistart(cusp_family(10.0, 1.0), 12);
    REQUIRE(!pts.empty());
    bool found = false;
    for (const auto& pt : pts)
        if (std::abs(*pt.alpha - 0.0403477) < 1e-5 && std::abs(pt.load - 11.961144) < 1e-4)
            found = true;
    CHECK(found);
}

TEST_CASE("two cusps of the m1=5, r=0.65 family") {
    // golden values frozen from the first certified computation
    const auto pts = find_cusps_multistart(cusp_family(5.0, 0.65), 24);
    REQUIRE(pts.size() >= 2);
    for (const auto& pt : pts) {
        CHECK(pt.jordan_order == 3);
        for (double r : pt.residuals) CHECK(r < 1e-9);
    }
}

TEST_CASE("vertical tangent of the two-link family sits at the zero-mass corner") {
    SweepSpec spec;
    spec.base = ztest::make2(1, 1, 1, 1);
    spec.plane_i = 1;
    spec.plane_j = 2;
    spec.r = 1.0;
    spec.alpha_grid = linspace(0.1, M_PI / 2, 40);
    spec.load_cap = 8.0;
    SearchSettings s;
    s.scan_step = 0.05;
    const auto sweep = sweep_azimuth(spec, s);
    const auto tangents = find_vertical_tangent(sweep);
    REQUIRE(!tangents.empty());
    bool corner = false;
    for (const auto& pt : tangents)
        if (std::abs(*pt.alpha - M_PI / 2) < 0.05 && std::abs(pt.load - 2.5) < 0.1) corner = true;
    CHECK(corner);
}

TEST_CASE("constant boundary produces no vertical tangents") {
    // radially swept two-link family: the ruled surface makes every row
    // identical, so the boundary is flat in the sweep parameter
    SweepSpec spec;
    spec.base = ztest::make2(2, 1, 1, 1);
    spec.plane_i = 1;
    spec.plane_j = 2;
    spec.r = 1.0;
    const double alpha_z = std::atan(0.5);
    spec.alpha_grid = {alpha_z, alpha_z + 1e-4, alpha_z + 2e-4, alpha_z + 3e-4, alpha_z + 4e-4};
    spec.load_cap = 6.0;
    SearchSettings s;
    s.scan_step = 0.05;
    const auto lt = find_vertical_tangent(sweep_azimuth(spec, s));
    CHECK(lt.empty());
}

TEST_CASE("vertical tangent adjacent to the three-link cusp") {
    SweepSpec family = cusp_family(10.0, 1.0);
    family.alpha_grid = linspace(0.005, 0.12, 30);
    family.load_cap = 16.0;
    SearchSettings s;
    s.scan_step = 0.02;
    const auto sweep = sweep_azimuth(family, s);
    const auto tangents = find_vertical_tangent(sweep);
    bool near_cusp = false;
    for (const auto& pt : tangents)
        if (std::abs(*pt.alpha - 0.0403477) < 0.02) near_cusp = true;
    CHECK(near_cusp);
}

TEST_CASE("umbrella apex certification") {
    const auto pt = certify_umbrella_apex_m2(1.0, 1.0, 1.0);
    CHECK(pt.kind == SingularKind::UMBRELLA_APEX);
    CHECK(pt.load == doctest::Approx(2.0));
    CHECK(pt.residuals[0] < 1e-9);   // min equals 2
    CHECK(pt.residuals[1] < 1e-6);   // on the matched-ratio ray
    CHECK(pt.residuals[2] < 1e-9);   // radial-scale invariance
    CHECK(pt.residuals[3] < 1e-8);   // numeric cross-check
    CHECK(*pt.alpha == doctest::Approx(M_PI / 4).epsilon(1e-6));
    CHECK(pt.jordan_order == 2);

    // branch-coincidence ray for c1 = 4 c2: m1 = 4 m2
    const auto pt4 = certify_umbrella_apex_m2(4.0, 1.0, 1.0);
    CHECK(pt4.masses[0] == doctest::Approx(4.0 * pt4.masses[1]).epsilon(1e-5));
    CHECK(pt4.residuals[0] < 1e-9);
}
