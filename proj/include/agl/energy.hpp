#pragma once

#include <vector>

#include "agl/field.hpp"

namespace agl {

/// Terms of the discrete energy E = (1-delta)/2 |grad u|^2 + delta (div u)^2 + W,
/// W(u) = (1 - |u|^2)^2 / 4, integrated over the full disk.
struct EnergyBreakdown {
    double dirichlet = 0.0;  // (1-delta)/2 * integral |grad u|^2
    double div_term = 0.0;   // delta * integral (div u)^2
    double potential = 0.0;  // integral W(u)
    double total = 0.0;
    double delta = 0.0;
};

/// Quadrature: trapezoid in both directions with the polar Jacobian r;
/// derivatives by centered differences, one-sided second order at the
/// radial ends. Sector patches integrate over one fundamental sector and
/// multiply by the number of angular copies.
EnergyBreakdown energy_E(const Field2D& f, double delta);

/// Same quadrature applied to the density
/// 1/2 |grad u|^2 + delta/2 ((div u)^2 - (curl u)^2) + W(u).
double energy_F(const Field2D& f, double delta);

/// Integral of det(grad u) under the same quadrature. E - F equals
/// delta times this integral up to roundoff (identically, not just to
/// quadrature accuracy, since the discrete densities satisfy the same
/// pointwise algebra as the continuum ones).
double integral_det_grad(const Field2D& f);

/// Potential mass 2 * integral W(u), the quantity bounded by the circle
/// constant C.
double potential_mass(const Field2D& f, double delta);

/// Pointwise residual of (1-delta) Lap u + 2 delta grad(div u) = (|u|^2-1) u
/// on interior nodes (0 < r < R); zero elsewhere. Centered second-order
/// polar discretization; div at the origin via the divergence theorem on
/// the first ring.
Field2D el_residual(const Field2D& f, double delta);

double el_residual_sup(const Field2D& f, double delta);

// --- free degrees of freedom of a sector field -----------------------------
// Free DOFs are the two components at interior nodes i = 1..nr-1,
// j = 0..ncols-1; the origin and the boundary ring are fixed.

int free_dof_count(const Field2D& sector);
std::vector<double> get_free_dofs(const Field2D& sector);
void set_free_dofs(Field2D& sector, const std::vector<double>& x);

/// Exact partial derivatives of the discrete energy_E total with respect to
/// every free DOF (differentiate-the-quadrature, including the twisted wrap
/// and the one-sided boundary stencils in the chain rule).
std::vector<double> energy_gradient(const Field2D& sector, double delta);

/// energy_E total and its gradient in one pass (the minimizer's hot path).
double energy_value_and_gradient(const Field2D& sector, double delta, std::vector<double>& grad);

/// Quadrature weight of each free DOF's node (used as a diagonal
/// preconditioner by the minimizer).
std::vector<double> free_dof_weights(const Field2D& sector);

}  // namespace agl
