#pragma once

#include <utility>
#include <vector>

#include "agl/field.hpp"

namespace agl {

/// Multi-vortex test map on the half disk D_{1/2}: one vortex of degree d at
/// the origin plus, for N >= 1, rings of 2(1-d) unit vortices at radii
/// lambda_j = j/(4N), giving total boundary degree D = d + 2(1-d) N.
/// Amplitude collars min(|x - a| / (rho eps), 1) around each vortex (the
/// N = 0 map is min(2r/eps, 1) e^{i d theta}); outside the collars the map
/// is the unit-modulus canonical phase product of all vortex factors, which
/// is exactly equivariant for the symmetric vortex layout.
struct ComparisonMapSpec {
    int d = -1;
    int N = 0;
    double epsilon = 1e-2;
    double rho = 0.0;  // collar container radius; defaulted by make()

    static constexpr double epsilon_max = 0.5;

    static ComparisonMapSpec make(int d, int N, double epsilon);
    void validate() const;

    int satellite_count() const { return N == 0 ? 0 : 2 * (1 - d) * N; }
    int total_degree() const { return d + 2 * (1 - d) * N; }
    /// Vortex centers with degrees: origin first, then the satellites ring
    /// by ring.
    std::vector<std::pair<Vec2, int>> vortices() const;
    /// Amplitude collar radius around each vortex.
    double collar_radius() const { return N == 0 ? 0.5 * epsilon : rho * epsilon; }
};

/// Closed-form evaluation of the comparison map.
Vec2 comparison_value(const ComparisonMapSpec& spec, const Vec2& x);

/// Sector field of class (d, plus) over D_{1/2} sampled from the closed form.
Field2D construct_comparison(const ComparisonMapSpec& spec, int Nr, int Ntheta);

/// Energy of the comparison map,
///   integral (1-delta)/2 |grad u|^2 + delta (div u)^2 + (1/eps^2) W(u),
/// by composite quadrature: per-vortex polar grids (uniform across the
/// collar, geometric out to rho) plus a global grid on the remaining
/// exterior. delta = 0 gives the isotropic scaled energy whose ln(1/eps)
/// slope the construction pins down.
double comparison_energy(const ComparisonMapSpec& spec, double delta, int collar_nodes = 64);

/// (epsilon, energy) pairs over a decreasing epsilon list, plus the fitted
/// slope against ln(1/eps). Throws "unresolved collar" if collar_nodes < 8.
struct ComparisonCurve {
    std::vector<std::pair<double, double>> points;
    double slope = 0.0;
};
ComparisonCurve comparison_energy_curve(int d, int N, const std::vector<double>& eps_list,
                                        double delta, int collar_nodes = 64);

/// Log-linear bridge between an outer unit-circle-like trace at radius R and
/// the pure phase alpha e^{i D theta} at R/2:
///   rho(r,theta) = 1 + lambda(r) (rho_k(theta) - 1),  phi(r,theta) = lambda(r) phi_k(theta),
/// lambda = ln(2r/R)/ln 2. The trace must have winding D and modulus >= 1/2.
Field2D annulus_interpolation(const CircleTrace& outer, int inner_degree, Sign sign, int Nr);

}  // namespace agl
