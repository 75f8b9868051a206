#include <cmath>

#include "agl/analysis.hpp"
#include "agl/comparison.hpp"
#include "agl/energy.hpp"
#include "doctest.h"

using namespace agl;

TEST_CASE("N = 0 map is the single-collar vortex") {
    const auto spec = ComparisonMapSpec::make(-1, 0, 1e-2);
    const Field2D f = construct_comparison(spec, 64, 64);
    for (int i = 1; i <= 64; i += 7)
        for (int j = 0; j < 64; j += 5) {
            const double r = f.node_r(i), th = f.node_theta(j);
            const Vec2 expect = polar_unit(-th) * std::min(2.0 * r / 1e-2, 1.0);
            CHECK((f.at(i, j) - expect).norm() < 1e-12);
        }
    CHECK(degree_at_infinity(f, {0.9}) == -1);
}

TEST_CASE("N = 1 layout: four satellites, total degree 3, exact equivariance") {
    const auto spec = ComparisonMapSpec::make(-1, 1, 1e-2);
    CHECK(spec.total_degree() == 3);
    const auto vs = spec.vortices();
    REQUIRE(vs.size() == 5);
    CHECK(vs[0].second == -1);
    for (int k = 1; k <= 4; ++k) {
        CHECK(vs[k].second == 1);
        CHECK(vs[k].first.norm() == doctest::Approx(0.25).epsilon(1e-14));
        const double ang = std::atan2(vs[k].first.y, vs[k].first.x);
        CHECK(std::remainder(ang - (k - 1) * M_PI / 2.0, 2.0 * M_PI) ==
              doctest::Approx(0.0).epsilon(1e-12));
    }

    const Field2D f = construct_comparison(spec, 96, 96);
    CHECK(equivariance_residual(SymmetryClass(-1, Sign::plus), f) < 1e-12);
    CHECK(degree_at_infinity(f, {0.9}) == 3);  // probes r = 0.45
}

TEST_CASE("invalid comparison specs are rejected") {
    CHECK_THROWS_AS(ComparisonMapSpec::make(-1, 0, 0.9), std::invalid_argument);
    CHECK_THROWS_AS(ComparisonMapSpec::make(0, 0, 1e-2), std::invalid_argument);
    ComparisonMapSpec bad = ComparisonMapSpec::make(-1, 1, 1e-2);
    bad.rho = 0.2;  // satellite disks would overlap
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("isotropic energy slope matches the degree count") {
    const std::vector<double> eps{1e-2, 1e-3, 1e-4};

    const ComparisonCurve c0 = comparison_energy_curve(-1, 0, eps, 0.0);
    INFO("N=0 slope: ", c0.slope);
    CHECK(std::abs(c0.slope - M_PI) < 0.05 * M_PI);

    const ComparisonCurve c1 = comparison_energy_curve(-1, 1, eps, 0.0);
    INFO("N=1 slope: ", c1.slope);
    CHECK(std::abs(c1.slope - 5.0 * M_PI) < 0.05 * 5.0 * M_PI);
}

TEST_CASE("anisotropy-weighted slope stays inside the (1+3delta) envelope") {
    const double delta = 0.2;
    const std::vector<double> eps{1e-2, 1e-3, 1e-4};
    const ComparisonCurve c = comparison_energy_curve(-1, 1, eps, delta);
    INFO("weighted slope: ", c.slope);
    CHECK(c.slope <= (1.0 + 3.0 * delta) * 5.0 * M_PI * 1.05);
}

TEST_CASE("unresolved collars are rejected") {
    CHECK_THROWS_WITH_AS(comparison_energy_curve(-1, 0, {1e-2, 1e-3}, 0.0, 4),
                         "unresolved collar", std::runtime_error);
}

TEST_CASE("annulus interpolation of a pure phase trace is constant in r") {
    const int D = 3, M = 96;
    CircleTrace outer;
    outer.radius = 20.0;
    for (int m = 0; m < M; ++m) outer.samples.push_back(polar_unit(D * 2.0 * M_PI * m / M));
    const Field2D f = annulus_interpolation(outer, D, Sign::plus, 16);
    for (int i = 0; i <= 16; ++i)
        for (int j = 0; j < M; ++j)
            CHECK((f.at(i, j) - outer.samples[j]).norm() < 1e-12);
}

TEST_CASE("annulus interpolation bridges to the pure inner phase") {
    const int D = -1, M = 64;
    const SymmetryClass cls(-1, Sign::plus);
    CircleTrace outer;
    outer.radius = 20.0;
    for (int m = 0; m < M; ++m) {
        const double th = 2.0 * M_PI * m / M;
        outer.samples.push_back(polar_unit(D * th + 0.1 * std::sin(4.0 * th)));
    }
    const Field2D f = annulus_interpolation(outer, D, Sign::plus, 24);
    // inner ring is exactly alpha e^{i D theta}
    for (int j = 0; j < M; ++j)
        CHECK((f.at(0, j) - polar_unit(D * f.node_theta(j))).norm() < 1e-12);
    // outer ring reproduces the trace
    for (int j = 0; j < M; ++j) CHECK((f.at(24, j) - outer.samples[j]).norm() < 1e-12);
    // the trace phase is equivariant, so the bridge is too
    CHECK(equivariance_residual(cls, f) < 1e-12);
}

TEST_CASE("annulus energy is scale invariant for unit-modulus traces") {
    const int D = -1, M = 64, n = 2;
    auto bridge_energy = [&](double R) {
        CircleTrace outer;
        outer.radius = R;
        for (int m = 0; m < M; ++m) {
            const double th = 2.0 * M_PI * m / M;
            outer.samples.push_back(polar_unit(D * th + 0.1 * std::cos(2.0 * n * th)));
        }
        const Field2D f = annulus_interpolation(outer, D, Sign::plus, 32);
        return energy_E(f, 0.1).total;
    };
    const double e20 = bridge_energy(20.0), e40 = bridge_energy(40.0);
    INFO("annulus energies: ", e20, " vs ", e40);
    CHECK(std::abs(e20 - e40) < 1e-10 * (1.0 + std::abs(e20)));
}

TEST_CASE("annulus interpolation rejects bad traces") {
    const int M = 64;
    CircleTrace outer;
    outer.radius = 10.0;
    for (int m = 0; m < M; ++m) outer.samples.push_back(polar_unit(2.0 * M_PI * m / M));
    CHECK_THROWS_AS(annulus_interpolation(outer, 2, Sign::plus, 8), std::invalid_argument);
    outer.samples[5] = outer.samples[5] * 0.1;
    CHECK_THROWS_AS(annulus_interpolation(outer, 1, Sign::plus, 8), std::runtime_error);
}
