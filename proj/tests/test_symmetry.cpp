#include <algorithm>
#include <cmath>

#include "agl/symmetry.hpp"
#include "doctest.h"

using namespace agl;

namespace {

std::vector<GroupElement> all_elements(const SymmetryClass& cls) {
    std::vector<GroupElement> out;
    for (int k = 0; k < cls.rotation_count(); ++k) out.push_back(GroupElement::rotation(k));
    for (int k = 0; k < cls.rotation_count(); ++k) out.push_back(GroupElement::reflection(k));
    return out;
}

double mat_dist(const Mat2& a, const Mat2& b) {
    return std::max({std::abs(a.a - b.a), std::abs(a.b - b.b), std::abs(a.c - b.c),
                     std::abs(a.d - b.d)});
}

}  // namespace

TEST_CASE("dihedral group law and element matrices agree") {
    for (int d : {-1, -2, -3}) {
        const SymmetryClass cls(d, Sign::plus);
        const auto elems = all_elements(cls);
        CHECK(static_cast<int>(elems.size()) == cls.group_order());
        for (const auto& g : elems)
            for (const auto& h : elems) {
                const Mat2 lhs = element_matrix(cls, compose(cls, g, h));
                const Mat2 rhs = element_matrix(cls, g).compose(element_matrix(cls, h));
                CHECK(mat_dist(lhs, rhs) < 1e-12);
            }
        for (const auto& g : elems) {
            const GroupElement gi = inverse(cls, g);
            CHECK(compose(cls, g, gi) == GroupElement::identity());
            CHECK(compose(cls, gi, g) == GroupElement::identity());
        }
        // s_i s_j = r^{i-j}
        const int m = 2 * cls.n();
        CHECK(compose(cls, GroupElement::reflection(3 % m), GroupElement::reflection(1)) ==
              GroupElement::rotation(mod_index(3 % m - 1, m)));
    }
}

TEST_CASE("mu is a homomorphism satisfying the sign condition") {
    for (int d : {-1, -2, -3}) {
        for (Sign sign : {Sign::plus, Sign::minus}) {
            const SymmetryClass cls(d, sign);
            const auto elems = all_elements(cls);
            for (const auto& g : elems)
                for (const auto& h : elems) {
                    const GroupElement lhs = mu_image(cls, compose(cls, g, h));
                    const GroupElement rhs = compose(cls, mu_image(cls, g), mu_image(cls, h));
                    CHECK(lhs == rhs);
                }
            // mu(g) is either g or the antipode composed with g.
            for (const auto& g : elems) {
                const Mat2 mg = mu_matrix(cls, g);
                const Mat2 eg = element_matrix(cls, g);
                const Mat2 sg{-eg.a, -eg.b, -eg.c, -eg.d};
                CHECK((mat_dist(mg, eg) < 1e-12 || mat_dist(mg, sg) < 1e-12));
            }
        }
    }
}

TEST_CASE("mu images match the defining assignments") {
    // d = -1 (n = 2): the rotation generator maps to its d-th power.
    const SymmetryClass cp(-1, Sign::plus);
    CHECK(mu_image(cp, GroupElement::rotation(1)) == GroupElement::rotation(3));
    CHECK(mu_image(cp, GroupElement::reflection(0)) == GroupElement::reflection(0));
    CHECK(mu_image(cp, GroupElement::identity()) == GroupElement::identity());

    // d = -2 (n = 3), minus class: s_0 maps to sigma s_0 = s_n.
    const SymmetryClass cm(-2, Sign::minus);
    CHECK(mu_image(cm, GroupElement::reflection(0)) == GroupElement::reflection(3));
    CHECK(mu_image(cm, GroupElement::identity()) == GroupElement::identity());
}

TEST_CASE("winding number of sampled phases") {
    auto phase_trace = [](int deg, double modulus, int m) {
        CircleTrace t;
        t.radius = 1.0;
        for (int k = 0; k < m; ++k) {
            const double th = 2.0 * M_PI * k / m;
            t.samples.push_back(polar_unit(deg * th) * modulus);
        }
        return t;
    };
    CHECK(winding_number(phase_trace(1, 1.0, 64)) == 1);
    CHECK(winding_number(phase_trace(-3, 0.8, 64)) == -3);

    // independent of the starting sample
    CircleTrace rotated = phase_trace(-3, 0.8, 64);
    std::rotate(rotated.samples.begin(), rotated.samples.begin() + 17, rotated.samples.end());
    CHECK(winding_number(rotated) == -3);

    CircleTrace small = phase_trace(1, 1.0, 64);
    small.samples[10] = small.samples[10] * 0.1;
    CHECK_THROWS_WITH_AS(winding_number(small), "degree undefined on this circle",
                         std::runtime_error);

    CHECK_THROWS_WITH_AS(winding_number(phase_trace(20, 1.0, 64)), "undersampled trace",
                         std::runtime_error);
    CHECK_THROWS_AS(winding_number(phase_trace(1, 1.0, 4)), std::invalid_argument);
}

TEST_CASE("degree class membership") {
    CHECK(degree_in_class(-1, -1));
    CHECK(degree_in_class(-1, 3));
    CHECK(degree_in_class(-1, -5));
    CHECK_FALSE(degree_in_class(-1, 0));
    CHECK_FALSE(degree_in_class(-1, 1));
    CHECK(degree_in_class(-2, 4));
    CHECK_FALSE(degree_in_class(-2, 2));
}
