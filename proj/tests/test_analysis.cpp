#include <cmath>

#include "agl/analysis.hpp"
#include "agl/comparison.hpp"
#include "agl/io_util.hpp"
#include "agl/radial.hpp"
#include "doctest.h"

using namespace agl;

TEST_CASE("f(x) closed-form spot values") {
    CHECK(f_of_x(-1, 4.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(f_of_x(-1, -4.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(f_of_x(0, 1.0), std::invalid_argument);
}

TEST_CASE("brute-force threshold search agrees with the closed form") {
    for (int d = -1; d >= -6; --d) {
        int argx = 0;
        const double brute = delta_star_bruteforce(d, 50, &argx);
        const ThresholdRecord rec = delta0(d);
        CHECK(std::abs(brute - rec.delta_star) < 1e-12);
        CHECK(argx == 2 * (1 - d));
    }
    CHECK_THROWS_AS(delta_star_bruteforce(-1, 5), std::invalid_argument);
}

TEST_CASE("delta0 values to nine digits") {
    CHECK(delta0(-1).delta0 == doctest::Approx(2.0 / std::sqrt(3.0) - 1.0).epsilon(1e-12));
    CHECK(delta0(-1).delta0 == doctest::Approx(0.1547005384).epsilon(1e-9));
    CHECK(delta0(-2).delta0 == doctest::Approx(3.0 / 23.0).epsilon(1e-12));
    CHECK(delta0(-3).delta0 == doctest::Approx(2.0 / 19.0).epsilon(1e-12));
    // strictly decreasing in |d|
    for (int d = -1; d >= -5; --d) CHECK(delta0(d).delta0 > delta0(d - 1).delta0);
}

TEST_CASE("threshold table CSV carries both columns") {
    const std::string csv = threshold_table_csv({-1, -2}, 50);
    const auto lines = split(csv, '\n');
    REQUIRE(lines.size() >= 3);
    CHECK(lines[0] == "d,delta_star,delta_star_bruteforce,delta0,argmin_x");
    const auto row = split(lines[1], ',');
    CHECK(row[0] == "-1");
    CHECK(std::stod(row[1]) == doctest::Approx(1.0 / 6.0));
    CHECK(std::stod(row[3]) == doctest::Approx(0.15470053837925168));
}

TEST_CASE("circle diagnostics of flat and radial fields") {
    Field2D flat = Field2D::disk(4.0, 16, 32);
    for (auto& v : flat.data) v = Vec2{1.0, 0.0};
    const auto rows = circle_diagnostics(flat, 0.2, {1.0, 2.0, 3.0});
    for (const auto& row : rows) {
        CHECK(std::abs(row.f) < 1e-12);
        CHECK(std::abs(row.g) < 1e-12);
        CHECK(std::abs(row.sigma) < 1e-12);
        REQUIRE(row.winding.has_value());
        CHECK(*row.winding == 0);
    }

    const RadialProfile p = solve_radial_profile(-1, 40.0, 2048, 1e-10);
    const SymmetryClass cls(-1, Sign::plus);
    const Field2D f = radial_sector_field(p, cls, {1.0, 0.0}, 1.0, 16.0, 96, 96);
    const auto diag = circle_diagnostics(f, 0.0, {1.0, 4.0, 10.0});
    // amplitude approaches 1: sigma decreasing, g decaying
    CHECK(diag[0].sigma > diag[1].sigma);
    CHECK(diag[1].sigma > diag[2].sigma);
    CHECK(diag[0].g > diag[2].g);
    for (const auto& row : diag) {
        REQUIRE(row.winding.has_value());
        CHECK(*row.winding == -1);
    }
    CHECK_THROWS_AS(circle_diagnostics(f, 0.0, {20.0}), std::invalid_argument);
}

TEST_CASE("degree at infinity of radial and multi-vortex fields") {
    const RadialProfile p = solve_radial_profile(-2, 60.0, 2048, 1e-10);
    const SymmetryClass cls(-2, Sign::plus);
    const Field2D f = radial_sector_field(p, cls, {1.0, 0.0}, 1.0, 20.0, 64, 64);
    CHECK(degree_at_infinity(f) == -2);

    const auto spec = ComparisonMapSpec::make(-1, 1, 1e-2);
    const Field2D c = construct_comparison(spec, 96, 96);
    CHECK(degree_at_infinity(c, {0.9}) == 3);
    // probes inside and outside the satellite ring disagree
    CHECK_THROWS_WITH_AS(degree_at_infinity(c, {0.3, 0.9}),
                         "degree not stabilized: increase R", std::runtime_error);
}

TEST_CASE("nonradiality measures amplitude modulation only") {
    const RadialProfile p = solve_radial_profile(-1, 40.0, 2048, 1e-10);
    const SymmetryClass cls(-1, Sign::plus);
    const Field2D f = radial_sector_field(p, cls, {1.0, 0.0}, 1.0, 10.0, 64, 64);
    CHECK(nonradiality(f, 1.0) < 1e-6);
    CHECK(nonradiality(f, 7.3) < 1e-6);

    Field2D g = f;
    for (int i = 1; i <= g.nr; ++i)
        for (int j = 0; j < g.ncols; ++j)
            g.at(i, j) = g.at(i, j) * (1.0 + 0.05 * std::cos(4.0 * g.node_theta(j)));
    CHECK(nonradiality(g, 5.0) > 0.03);
    CHECK_THROWS_AS(nonradiality(f, 11.0), std::invalid_argument);
}

TEST_CASE("energy growth bands") {
    // synthetic vortex-like data: E = pi ln R + 2
    std::vector<std::pair<double, double>> pts;
    for (double R : {5.0, 10.0, 20.0}) pts.emplace_back(R, M_PI * std::log(R) + 2.0);
    const EnergyGrowthReport ok = energy_growth_check(pts, -1, 0.0, -1);
    CHECK(ok.slope == doctest::Approx(M_PI).epsilon(1e-12));
    CHECK(ok.in_band);

    // constant-field data has slope 0 and is flagged
    std::vector<std::pair<double, double>> flat{{5.0, 0.1}, {10.0, 0.1}, {20.0, 0.1}};
    const EnergyGrowthReport bad = energy_growth_check(flat, -1, 0.0, -1);
    CHECK(std::abs(bad.slope) < 1e-12);
    CHECK_FALSE(bad.in_band);

    CHECK_THROWS_AS(energy_growth_check({{5.0, 1.0}, {10.0, 2.0}}, -1, 0.0, -1),
                    std::invalid_argument);

    // the delta = 0.1 band from the two growth bounds
    const EnergyGrowthReport band = energy_growth_check(pts, -1, 0.1, -1);
    CHECK(band.lower == doctest::Approx(0.9 * 0.9 * M_PI));
    CHECK(band.upper == doctest::Approx(1.1 * 1.3 * M_PI));
}
