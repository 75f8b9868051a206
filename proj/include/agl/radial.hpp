#pragma once

#include <string>
#include <vector>

#include "agl/field.hpp"

namespace agl {

/// Radial amplitude eta of the separable degree-d solution eta(r) e^{i d theta}
/// of the isotropic equation, solved on [0, R_max] with eta(0) = 0,
/// eta(R_max) = 1. The profile depends on d only through d^2.
struct RadialProfile {
    int d = -1;
    double r_max = 40.0;
    std::vector<double> eta;    // nodes r_i = i * r_max / N, i = 0..N
    double residual_sup = 0.0;  // ODE residual on interior nodes
    double boundary_defect = 0.0;  // |1 - eta(R_max)|, zero by construction
    double far_field_gap = 0.0;    // |eta - (1 - d^2/(2 r^2))| at r = 0.8 R_max

    int segments() const { return static_cast<int>(eta.size()) - 1; }
    double dr() const { return r_max / segments(); }
    /// Cubic Lagrange interpolation; throws when r lies outside [0, R_max].
    double eta_at(double r) const;
};

/// Damped-Newton relaxation of the centered-difference two-point problem,
/// initial guess r / sqrt(r^2 + d^2). Throws on Newton divergence with the
/// iterate trace in the message.
RadialProfile solve_radial_profile(int d, double r_max, int N, double tol);

/// Independent oracle: shoot the ODE from the origin series eta ~ a r^{|d|}
/// and bisect the slope a until eta(R_max) = 1.
RadialProfile solve_radial_shooting(int d, double r_max, int N, double tol);

/// Sector field u = alpha * eta(r/s) e^{i d theta} for a dihedral class
/// (alpha acts as the complex factor 1 or i).
Field2D radial_sector_field(const RadialProfile& profile, const SymmetryClass& cls,
                            const Vec2& alpha, double scale, double R, int Nr, int Ntheta);

/// Full-disk version, valid for any d (used for the degree-1 scaled
/// solutions of the anisotropic equation).
Field2D radial_disk_field(const RadialProfile& profile, int d, const Vec2& alpha, double scale,
                          double R, int Nr, int Mtheta);

std::string profile_to_csv(const RadialProfile& p, double tol);
void write_profile_csv(const RadialProfile& p, double tol, const std::string& path);

}  // namespace agl
