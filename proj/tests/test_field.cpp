#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "agl/energy.hpp"
#include "agl/field.hpp"
#include "agl/io_util.hpp"
#include "doctest.h"

using namespace agl;

namespace {

Field2D constant_disk(const Vec2& v, double R = 1.0, int Nr = 8, int M = 16) {
    Field2D f = Field2D::disk(R, Nr, M);
    for (auto& u : f.data) u = v;
    return f;
}

/// f(r) e^{i d theta + phase_rot} with real radial part.
Field2D separable_disk(int d, double R, int Nr, int M, double phase_rot = 0.0) {
    Field2D f = Field2D::disk(R, Nr, M);
    for (int i = 0; i <= Nr; ++i) {
        const double amp = i == 0 ? 0.0 : f.node_r(i) / R;
        for (int j = 0; j < M; ++j)
            f.at(i, j) = polar_unit(d * f.node_theta(j) + phase_rot) * amp;
    }
    return f;
}

Field2D random_disk(unsigned seed, double R, int Nr, int M) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Field2D f = Field2D::disk(R, Nr, M);
    const int F = 3;  // random low-order Fourier content, smooth in r
    std::vector<std::array<Vec2, 4>> coef(2 * F + 1);
    for (auto& c : coef)
        c = {Vec2{unif(rng), unif(rng)}, Vec2{unif(rng), unif(rng)}, Vec2{unif(rng), unif(rng)},
             Vec2{unif(rng), unif(rng)}};
    for (int i = 0; i <= Nr; ++i) {
        const double r = f.node_r(i) / R;
        for (int j = 0; j < M; ++j) {
            const double th = f.node_theta(j);
            Vec2 v{};
            for (int k = -F; k <= F; ++k) {
                const auto& c = coef[k + F];
                v += (c[0] * r + c[1] * (r * r)) * std::cos(k * th) +
                     (c[2] * r + c[3] * (r * r)) * std::sin(k * th);
            }
            f.at(i, j) = v;
        }
    }
    f.set_origin(f.at(0, 0));
    return f;
}

double field_dist(const Field2D& a, const Field2D& b) {
    double sup = 0.0;
    for (size_t k = 0; k < a.data.size(); ++k)
        sup = std::max(sup, (a.data[k] - b.data[k]).norm());
    return sup;
}

}  // namespace

TEST_CASE("act on a constant field applies the inverse target rotation") {
    const SymmetryClass cls(-1, Sign::plus);
    const Field2D f = constant_disk({0.0, 1.0});
    const Field2D g = act(cls, GroupElement::rotation(1), f);
    for (const auto& v : g.data) {
        CHECK(v.x == doctest::Approx(-1.0).epsilon(1e-14));
        CHECK(std::abs(v.y) < 1e-14);
    }
}

TEST_CASE("act is a group action: g then g^{-1} restores the field") {
    const SymmetryClass cls(-2, Sign::minus);  // n = 3: columns must be a multiple of 12
    const Field2D f = random_disk(7, 1.0, 6, 24);
    for (const auto& g :
         {GroupElement::rotation(1), GroupElement::rotation(4), GroupElement::reflection(2)}) {
        const Field2D back = act(cls, inverse(cls, g), act(cls, g, f));
        CHECK(field_dist(back, f) < 1e-13);
    }
}

TEST_CASE("equivariant fields are fixed by act and have zero residual") {
    const SymmetryClass cls(-1, Sign::plus);
    const Field2D f = separable_disk(-1, 1.0, 8, 16);
    CHECK(equivariance_residual(cls, f) < 1e-14);
    for (const auto& g :
         {GroupElement::rotation(1), GroupElement::reflection(0), GroupElement::reflection(3)}) {
        CHECK(field_dist(act(cls, g, f), f) < 1e-13);
    }
    // u -> iu carries plus-equivariant maps to minus-equivariant maps
    const SymmetryClass cm(-1, Sign::minus);
    const Field2D fi = separable_disk(-1, 1.0, 8, 16, M_PI / 2.0);
    CHECK(equivariance_residual(cm, fi) < 1e-14);
    CHECK(equivariance_residual(cls, fi) > 0.5);
}

TEST_CASE("equivariance residual of a constant field") {
    // (0,1) under the plus class: the rotation generator misses by sqrt(2),
    // the reflection by 2; the max is 2.
    const SymmetryClass plus(-1, Sign::plus);
    CHECK(equivariance_residual(plus, constant_disk({0.0, 1.0})) ==
          doctest::Approx(2.0).epsilon(1e-12));
    // under the minus class the reflection fixes (0,1), so only the rotation
    // violation sqrt(2) remains
    const SymmetryClass minus(-1, Sign::minus);
    CHECK(equivariance_residual(minus, constant_disk({0.0, 1.0})) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("symmetrize projects onto the equivariant subspace") {
    const SymmetryClass cls(-1, Sign::plus);

    const Field2D equi = separable_disk(-1, 1.0, 8, 16);
    CHECK(field_dist(symmetrize(cls, equi), equi) < 1e-14);

    const Field2D zeroed = symmetrize(cls, constant_disk({0.0, 1.0}));
    for (const auto& v : zeroed.data) CHECK(v.norm() < 1e-15);

    const Field2D f = random_disk(11, 1.0, 6, 16);
    const Field2D p1 = symmetrize(cls, f);
    const Field2D p2 = symmetrize(cls, p1);
    CHECK(field_dist(p1, p2) < 1e-13);
    CHECK(equivariance_residual(cls, p1) < 1e-13);
    CHECK(p1.origin().norm() == 0.0);  // origin projected to zero exactly

    // orthogonal projection: <u - Pu, Pv> = 0 in the grid inner product
    const Field2D g = random_disk(12, 1.0, 6, 16);
    const Field2D pg = symmetrize(cls, g);
    double inner = 0.0;
    for (size_t k = 0; k < f.data.size(); ++k)
        inner += (f.data[k] - p1.data[k]).dot(pg.data[k]);
    CHECK(std::abs(inner) < 1e-12);
}

TEST_CASE("grid/group mismatch is rejected") {
    const SymmetryClass cls(-2, Sign::plus);  // n = 3, needs multiples of 12
    const Field2D f = constant_disk({1.0, 0.0}, 1.0, 6, 16);
    CHECK_THROWS_WITH_AS(act(cls, GroupElement::rotation(1), f), "grid/group mismatch",
                         std::invalid_argument);
    CHECK_THROWS_AS(symmetrize(cls, f), std::invalid_argument);
}

TEST_CASE("symmetrized random fields wind inside the degree class") {
    int tested = 0;
    for (int n : {2, 3, 4}) {
        const int d = 1 - n;
        const SymmetryClass cls(d, Sign::plus);
        // multiple of 4n, dense enough that winding |d| + 2n stays sampled
        const int M = 32 * n;
        for (unsigned seed = 0; seed < 40; ++seed) {
            std::mt19937 rng(seed * 97 + n);
            std::uniform_real_distribution<double> unif(-1.0, 1.0);
            std::uniform_int_distribution<int> pick(-1, 1);
            const int w_target = d + 2 * n * pick(rng);  // dominant admissible winding
            Field2D f = Field2D::disk(1.0, 8, M);
            for (int i = 0; i <= 8; ++i) {
                const double r = f.node_r(i);
                for (int j = 0; j < M; ++j) {
                    Vec2 v = polar_unit(w_target * f.node_theta(j)) * (0.2 + r);
                    v += Vec2{unif(rng), unif(rng)} * 0.05;
                    f.at(i, j) = v;
                }
            }
            f.set_origin(f.at(0, 0));
            const Field2D p = symmetrize(cls, f);
            try {
                const int w = winding_number(ring_trace(p, 6), 0.5);
                CHECK(degree_in_class(d, w));
                ++tested;
            } catch (const std::exception&) {
                // winding undefined on this draw: outside the property's hypothesis
            }
        }
    }
    CHECK(tested >= 60);  // the guard must not swallow the whole property
}

TEST_CASE("sector fields extend equivariantly and restrict back") {
    const SymmetryClass cls(-2, Sign::plus);
    Field2D sector = Field2D::sector(cls, 2.0, 6, 8);
    for (int i = 1; i <= 6; ++i)
        for (int j = 0; j < 8; ++j)
            sector.at(i, j) = polar_unit(cls.d * sector.node_theta(j)) * sector.node_r(i);
    const Field2D disk = extend_to_disk(sector);
    CHECK(disk.ncols == 8 * 2 * cls.n());
    CHECK(equivariance_residual(cls, disk) < 1e-13);
    const Field2D back = restrict_to_sector(disk, cls);
    CHECK(field_dist(back, sector) < 1e-15);
}

TEST_CASE("field CSV round-trips exactly and validates invariants") {
    const SymmetryClass cls(-1, Sign::minus);
    Field2D f = Field2D::sector(cls, 3.0, 6, 8);
    for (int i = 1; i <= 6; ++i)
        for (int j = 0; j < 8; ++j)
            f.at(i, j) = complex_mul({0.0, 1.0}, polar_unit(cls.d * f.node_theta(j))) *
                         (f.node_r(i) / 3.0);
    f.delta_meta = 0.125;

    const std::string csv = field_to_csv(f);
    const Field2D g = field_from_csv(csv);
    CHECK(g.cls == f.cls);
    CHECK(g.delta_meta == f.delta_meta);
    CHECK(field_dist(f, g) == 0.0);  // bit-exact round trip

    SUBCASE("gluing violation is rejected") {
        Field2D h = f;
        h.twist += 0.3;  // stored glued column becomes inconsistent
        CHECK_THROWS_WITH_AS(field_from_csv(field_to_csv(h)),
                             "field file violates the gluing invariant", std::runtime_error);
    }
    SUBCASE("nonzero origin is rejected") {
        Field2D h = f;
        h.set_origin({0.5, 0.0});
        CHECK_THROWS_WITH_AS(field_from_csv(field_to_csv(h)),
                             "field file violates the origin invariant", std::runtime_error);
    }
    SUBCASE("reflection violation is rejected") {
        Field2D h = f;
        h.at(3, 2) += Vec2{0.3, -0.2};
        CHECK_THROWS_WITH_AS(field_from_csv(field_to_csv(h)),
                             "field file violates the reflection invariant", std::runtime_error);
    }
}

TEST_CASE("sampler interpolates smooth fields to second order") {
    auto exact = [](double r, double th) { return polar_unit(-th) * (r * (2.0 - r)); };
    auto build = [&](int N) {
        Field2D f = Field2D::disk(1.0, N, N);
        for (int i = 0; i <= N; ++i)
            for (int j = 0; j < N; ++j) f.at(i, j) = exact(f.node_r(i), f.node_theta(j));
        f.set_origin({0.0, 0.0});
        return f;
    };
    double err[2];
    int idx = 0;
    for (int N : {16, 32}) {
        const Field2D f = build(N);
        const FieldSampler s(f, false);
        double sup = 0.0;
        for (int k = 0; k < 200; ++k) {
            const double r = 0.05 + 0.9 * k / 200.0;
            const double th = std::fmod(2.0 * M_PI * (k * 0.618), 2.0 * M_PI);
            sup = std::max(sup, (s.value(r, th) - exact(r, th)).norm());
        }
        err[idx++] = sup;
    }
    CHECK(err[1] < err[0] / 3.0);  // ~second order
}

TEST_CASE("reflection projection enforces the sector constraint") {
    const SymmetryClass cls(-1, Sign::plus);
    Field2D f = Field2D::sector(cls, 2.0, 6, 8);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int i = 1; i <= 6; ++i)
        for (int j = 0; j < 8; ++j) f.at(i, j) = Vec2{unif(rng), unif(rng)};
    CHECK(reflection_residual(f) > 0.1);
    project_reflection(f);
    CHECK(reflection_residual(f) < 1e-14);
    Field2D g = f;
    project_reflection(g);
    CHECK(field_dist(f, g) < 1e-15);  // idempotent
}
