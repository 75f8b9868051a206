#pragma once

#include <stdexcept>
#include <vector>

#include "agl/geometry.hpp"

namespace agl {

enum class Sign { plus, minus };

inline const char* to_string(Sign s) { return s == Sign::plus ? "plus" : "minus"; }
Sign sign_from_string(const std::string& s);

/// Element of the dihedral group D_{2n}: rotations r^k by k*pi/n and
/// reflections s_k = r^k s_0 (s_0 fixes the x1 axis). Indices live in
/// [0, 2n) and compose by exact integer arithmetic.
struct GroupElement {
    enum class Kind { rotation, reflection };
    Kind kind = Kind::rotation;
    int index = 0;

    static GroupElement rotation(int k) { return {Kind::rotation, k}; }
    static GroupElement reflection(int k) { return {Kind::reflection, k}; }
    static GroupElement identity() { return {Kind::rotation, 0}; }

    bool operator==(const GroupElement&) const = default;
};

/// The equivariance class (d, sign) with d <= -1. Fixes n = 1 - d, the
/// dihedral group D_{2n} and the homomorphism it represents on values.
struct SymmetryClass {
    int d;
    Sign sign;

    SymmetryClass(int d_, Sign sign_) : d(d_), sign(sign_) {
        if (d >= 0) throw std::invalid_argument("SymmetryClass requires d <= -1");
    }

    int n() const { return 1 - d; }
    int rotation_count() const { return 2 * n(); }   // 2n rotations
    int group_order() const { return 4 * n(); }      // |D_{2n}| = 4n

    /// Sector angle pi/n of the fundamental domain.
    double sector_angle() const { return M_PI / n(); }

    bool operator==(const SymmetryClass&) const = default;
};

int mod_index(int k, int m);

/// Group law of D_{2n} on (kind, index) pairs.
GroupElement compose(const SymmetryClass& cls, const GroupElement& g, const GroupElement& h);
GroupElement inverse(const SymmetryClass& cls, const GroupElement& g);

/// Matrix of the element acting on the plane.
Mat2 element_matrix(const SymmetryClass& cls, const GroupElement& g);

/// Image mu_d^{+/-}(g) of a group element under the class homomorphism:
/// rotations map to r^{d k}; reflections s_k map to s_{d k} (plus) or
/// sigma s_{d k} = s_{d k + n} (minus).
GroupElement mu_image(const SymmetryClass& cls, const GroupElement& g);

/// Matrix of mu(g) acting on field values.
Mat2 mu_matrix(const SymmetryClass& cls, const GroupElement& g);

/// Polar angle reached when g acts on a point at angle theta.
double act_on_angle(const SymmetryClass& cls, const GroupElement& g, double theta);

/// Values of a planar field sampled on a centered circle at equally spaced
/// angles theta_m = 2 pi m / M, m = 0..M-1.
struct CircleTrace {
    std::vector<Vec2> samples;
    double radius = 1.0;
};

/// Winding number of the trace: accumulated principal-branch phase
/// increments over the closed loop, divided by 2 pi.
///
/// Throws if any sample has modulus below min_modulus ("degree undefined on
/// this circle") or if a single phase step exceeds pi/2 ("undersampled
/// trace").
int winding_number(const CircleTrace& trace, double min_modulus = 0.5);

/// True when w is congruent to d modulo 2(1-d).
bool degree_in_class(int d, int w);

}  // namespace agl
