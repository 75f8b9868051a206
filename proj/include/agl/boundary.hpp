#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "agl/symmetry.hpp"

namespace agl {

/// Phase representation psi of a unit-circle valued boundary map
/// zeta = alpha e^{i psi}, sampled at M equally spaced angles. The winding
/// class is carried by the decomposition psi = d theta + phi with phi
/// periodic (period pi/n) and odd, which is the lift of the equivariance
/// constraints.
struct BoundaryPhase {
    std::vector<double> psi;
    int d = -1;
    Sign sign = Sign::plus;

    int M() const { return static_cast<int>(psi.size()); }
    Vec2 alpha() const { return sign == Sign::plus ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0}; }
    /// psi at any index, continued by psi(theta + 2 pi) = psi(theta) + 2 pi d.
    double psi_at(int m) const;

    static BoundaryPhase pure_winding(int d, Sign sign, int M);
};

struct CircleEnergyValue {
    double value = 0.0;
    double el_residual = 0.0;
};

/// Trapezoidal quadrature of the reduced density
///   (psi'^2 / 2) (1 + s delta cos(2 theta - 2 psi)),  s = +1 plus / -1 minus,
/// with centered-difference psi'. Requires M >= 8 n samples.
double circle_energy(const BoundaryPhase& phase, double delta);

/// Sup norm of the centered-difference residual of
///   d/dtheta[(1 + s delta cos(2 theta - 2 psi)) psi'] = s delta sin(2 theta - 2 psi) psi'^2,
/// which is exactly the stationarity condition of the discrete energy.
double circle_el_residual(const BoundaryPhase& phase, double delta);

struct CircleMinimizeResult {
    BoundaryPhase phase;
    CircleEnergyValue energy;
    std::vector<double> start_values;  // converged energies of all starts
    bool start_disagreement = false;
    int iterations = 0;
};

/// Raised when no start converges; carries the best iterate found.
struct CircleSolveFailure : std::runtime_error {
    BoundaryPhase best;
    CircleSolveFailure(const std::string& msg, BoundaryPhase b)
        : std::runtime_error(msg), best(std::move(b)) {}
};

/// Minimize the circle energy over the odd, pi/n-periodic phase corrections
/// phi (psi = d theta + phi). Multi-start from phi = 0 and +-0.2 sin(2 n theta);
/// the best minimum is returned and all start values are recorded. Throws on
/// non-convergence with the best iterate's data in the message.
CircleMinimizeResult minimize_circle(int d, Sign sign, double delta, int M, double tol);

/// Unit-modulus trace alpha e^{i psi(theta_m)}.
CircleTrace boundary_field(const BoundaryPhase& phase);

/// CSV with a "# d=.. sign=.. delta=.. M=.. C=.." header and
/// theta,psi,u1,u2 rows.
std::string phase_to_csv(const BoundaryPhase& phase, double delta, double C);
void write_phase_csv(const BoundaryPhase& phase, double delta, double C, const std::string& path);
BoundaryPhase phase_from_csv(const std::string& content, double* delta_out = nullptr,
                             double* C_out = nullptr);

}  // namespace agl
