#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "agl/field.hpp"

namespace agl {

/// f(x) = (x^2 + 2dx - |x|) / (x^2 + 2dx + 3|x| + 4d^2), the function whose
/// infimum over the admissible degree offsets x in 2(1-d)Z \ {0} gives the
/// threshold delta_star(d). Asserts the denominator stays positive.
double f_of_x(int d, double x);

struct ThresholdRecord {
    int d = -1;
    double delta_star = 0.0;
    double delta0 = 0.0;
    int argmin_x = 0;
};

/// Minimum of f over x = 2(1-d)k, 0 < |k| <= K, with finite-difference spot
/// checks of the monotonicity pattern f' <= 0 left of -2(1-d) and f' >= 0
/// right of 2(1-d).
double delta_star_bruteforce(int d, int K, int* argmin_x = nullptr);

/// delta0(d) = min((2-2d)/(4d^2+10-10d), 2/sqrt(3)-1) with the closed-form
/// delta_star and the minimizing offset.
ThresholdRecord delta0(int d);

std::string threshold_table_csv(const std::vector<int>& d_list, int brute_K = 50);

/// Circle diagnostics at radius r:
///   f = r * integral over the circle (arclength) of the energy density,
///   g = r * integral of (1-|u|^2)^2,  sigma = sup |1 - |u||,
/// plus the winding when it is defined.
struct CircleDiagnostics {
    double r = 0.0;
    double f = 0.0;
    double g = 0.0;
    double sigma = 0.0;
    std::optional<int> winding;
};

std::vector<CircleDiagnostics> circle_diagnostics(const Field2D& field, double delta,
                                                  const std::vector<double>& radii,
                                                  int samples = 720);

std::string diagnostics_csv(const std::vector<CircleDiagnostics>& rows);

/// Common winding over probe circles at the given fractions of the outer
/// radius. Throws "degree not stabilized" when probes disagree, propagates
/// winding errors, and (for class-tagged fields) verifies membership in
/// d + 2(1-d)Z.
int degree_at_infinity(const Field2D& field,
                       const std::vector<double>& fractions = {0.5, 0.75, 0.95});

/// max - min of |u| over the interpolated circle of radius r.
double nonradiality(const Field2D& field, double r, int samples = 1024);

struct EnergyGrowthReport {
    double slope = 0.0;
    double lower = 0.0;   // (1 - tol_lo) * (1-delta) pi d_inf^2
    double upper = 0.0;   // (1 + tol_hi) * (1+3 delta) pi (d^2 + |d_inf - d|)
    bool in_band = false;
    std::vector<std::pair<double, double>> points;  // (R, E)
};

/// Least-squares slope of E(u, D_R) against ln R over >= 3 radii, compared
/// with the theoretical band.
EnergyGrowthReport energy_growth_check(const std::vector<std::pair<double, double>>& R_energy,
                                       int d, double delta, int d_infinity, double tol_lo = 0.1,
                                       double tol_hi = 0.1);

}  // namespace agl
