#include <cmath>
#include <cstring>

#include "agl/analysis.hpp"
#include "agl/radial.hpp"
#include "agl/solver.hpp"
#include "doctest.h"

using namespace agl;

namespace {

SolveConfig small_config(int d, Sign sign, double delta) {
    SolveConfig cfg;
    cfg.cls = SymmetryClass(d, sign);
    cfg.delta = delta;
    cfg.R = 8.0;
    cfg.Nr = 48;
    cfg.Ntheta = 48;
    cfg.tol = 2e-5;
    return cfg;
}

}  // namespace

TEST_CASE("isotropic minimizer matches the radial oracle") {
    const SolveConfig cfg = small_config(-1, Sign::plus, 0.0);
    const SolveResult res = minimize_2d(cfg);
    REQUIRE(res.converged);
    CHECK(res.final_gradient_norm <= cfg.tol);
    CHECK(res.boundary_C == doctest::Approx(M_PI).epsilon(1e-10));

    const RadialProfile p = solve_radial_profile(-1, 40.0, 4096, 1e-10);
    const Field2D oracle =
        radial_sector_field(p, cfg.cls, {1.0, 0.0}, 1.0, cfg.R, cfg.Nr, cfg.Ntheta);
    double sup = 0.0;
    for (size_t k = 0; k < oracle.data.size(); ++k)
        sup = std::max(sup, (oracle.data[k] - res.field.data[k]).norm());
    INFO("sup distance to radial oracle: ", sup);
    CHECK(sup < 5e-2);

    // accepted energies never increase
    for (size_t k = 1; k < res.energy_trace.size(); ++k)
        CHECK(res.energy_trace[k] <= res.energy_trace[k - 1] + 1e-10);

    // winding probes all in the admissible class and equal to d
    REQUIRE_FALSE(res.winding_probes.empty());
    for (int w : res.winding_probes) CHECK(w == -1);
}

TEST_CASE("anisotropic solve keeps the degree and the W bound") {
    const SolveConfig cfg = small_config(-1, Sign::plus, 0.1);
    const SolveResult res = minimize_2d(cfg);
    REQUIRE(res.converged);
    CHECK(res.boundary_C < M_PI);
    const double w_mass = 2.0 * res.breakdown.potential;
    CHECK(w_mass < res.boundary_C + 5e-3);  // finite-R discrete analogue of the W bound
    CHECK(degree_at_infinity(res.field) == -1);
    CHECK(nonradiality(res.field, 1.0) > 1e-4);  // genuinely nonradial at delta = 0.1
}

TEST_CASE("boundary ring equals the circle minimizer bit-exactly") {
    const SolveConfig cfg = small_config(-1, Sign::minus, 0.05);
    const SolveResult res = minimize_2d(cfg);
    const Vec2 alpha = res.boundary.alpha();
    for (int j = 0; j < cfg.Ntheta; ++j) {
        const Vec2 expect = complex_mul(alpha, polar_unit(res.boundary.psi[j]));
        const Vec2 got = res.field.at(cfg.Nr, j);
        CHECK(std::memcmp(&expect, &got, sizeof(Vec2)) == 0);
    }
}

TEST_CASE("solved fields satisfy the sector invariants") {
    const SolveConfig cfg = small_config(-2, Sign::plus, 0.08);
    const SolveResult res = minimize_2d(cfg);
    REQUIRE(res.converged);
    CHECK(res.field.origin().norm() == 0.0);
    CHECK(reflection_residual(res.field) < 1e-12);
    CHECK(equivariance_residual(*res.field.cls, res.field) < 1e-12);
    CHECK(degree_at_infinity(res.field) == -2);
}

TEST_CASE("warm restart from a converged field finishes immediately") {
    const SolveConfig cfg = small_config(-1, Sign::plus, 0.1);
    const SolveResult first = minimize_2d(cfg);
    REQUIRE(first.converged);
    const SolveResult again = minimize_2d(cfg, &first.field);
    CHECK(again.converged);
    CHECK(again.iterations <= 5);
    CHECK(std::abs(again.breakdown.total - first.breakdown.total) < 1e-9);
}

TEST_CASE("continuation in delta is continuous and increasingly nonradial") {
    SolveConfig base = small_config(-1, Sign::plus, 0.0);
    const std::vector<double> deltas{0.0, 0.05, 0.1};
    const auto chain = continuation_delta(deltas, base);
    REQUIRE(chain.size() == 3);
    for (const auto& r : chain) CHECK(r.converged);
    for (size_t k = 1; k < chain.size(); ++k)
        CHECK(std::abs(chain[k].breakdown.total - chain[k - 1].breakdown.total) < 0.5);

    const double nr0 = nonradiality(chain[0].field, 1.0);
    const double nr1 = nonradiality(chain[1].field, 1.0);
    const double nr2 = nonradiality(chain[2].field, 1.0);
    INFO("nonradiality along the chain: ", nr0, " ", nr1, " ", nr2);
    CHECK(nr0 < 1e-6);
    CHECK(nr1 > 10.0 * std::max(nr0, 1e-9));
    CHECK(nr2 > nr1);

    // halving the tolerance barely moves the energies
    SolveConfig tight = base;
    tight.delta = 0.1;
    tight.tol = base.tol / 2.0;
    const SolveResult refined = minimize_2d(tight, &chain[2].field);
    CHECK(std::abs(refined.breakdown.total - chain[2].breakdown.total) < 1e-6);
}

TEST_CASE("construction initialization reaches the same ground state") {
    SolveConfig cfg = small_config(-1, Sign::plus, 0.0);
    cfg.init = SolveConfig::Init::construction;
    cfg.construction_N = 0;
    const SolveResult res = minimize_2d(cfg);
    REQUIRE(res.converged);
    const SolveResult radial = minimize_2d(small_config(-1, Sign::plus, 0.0));
    CHECK(res.breakdown.total == doctest::Approx(radial.breakdown.total).epsilon(1e-5));
}

TEST_CASE("unconverged solves are reported, not hidden") {
    SolveConfig cfg = small_config(-1, Sign::plus, 0.1);
    cfg.max_iters = 3;
    const SolveResult res = minimize_2d(cfg);
    CHECK_FALSE(res.converged);
    CHECK(res.iterations <= 3);
}

TEST_CASE("config validation") {
    SolveConfig cfg = small_config(-1, Sign::plus, 0.0);
    cfg.R = 2.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_config(-1, Sign::plus, 0.0);
    cfg.delta = 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_config(-1, Sign::plus, 0.0);
    cfg.Ntheta = 47;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
