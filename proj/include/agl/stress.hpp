#pragma once

#include <vector>

#include "agl/field.hpp"

namespace agl {

/// Stress-energy tensor components on a full-disk grid (sector inputs are
/// extended first). Row i = 0 (the origin) is left zero; entries are valid
/// for i >= 1 with one-sided radial stencils at i = nr.
struct StressTensorField {
    int nr = 0;
    int ncols = 0;
    double r_lo = 0.0, r_hi = 0.0;
    double delta = 0.0;
    std::vector<double> t11, t12, t21, t22;
    // Pointwise W and div*curl, kept for the algebraic identity checks.
    std::vector<double> w, div_curl;

    size_t idx(int i, int j) const { return static_cast<size_t>(i) * ncols + j; }
};

StressTensorField stress_tensor(const Field2D& f, double delta);

/// Sup norm of the discrete row divergence (d1 T11 + d2 T12, d1 T21 + d2 T22)
/// over nodes 2 <= i <= nr-1 (pure centered stencils on the tensor entries).
double div_T_sup(const Field2D& f, double delta);

/// Both disk Pohozaev identities on D_radius(center): left and right sides,
/// absolute residuals, and residuals relative to max(|lhs|, |rhs|, 1).
struct PohozaevReport {
    Vec2 center;
    double radius = 0.0;
    double lhs1 = 0.0, rhs1 = 0.0, residual1 = 0.0, relative1 = 0.0;
    double lhs2 = 0.0, rhs2 = 0.0, residual2 = 0.0, relative2 = 0.0;
    int quadrature_order = 0;
};

/// Interior integrals and circle integrals by midpoint/uniform quadrature on
/// bilinearly interpolated values and gradients. quadrature_order is the
/// number of circle quadrature points (the ring count of the area quadrature
/// scales with it).
PohozaevReport pohozaev(const Field2D& f, double delta, const Vec2& center, double radius,
                        int quadrature_order = 512);

}  // namespace agl
