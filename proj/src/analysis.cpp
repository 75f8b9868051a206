#include "agl/analysis.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "agl/io_util.hpp"

namespace agl {

double f_of_x(int d, double x) {
    if (d > -1) throw std::invalid_argument("f_of_x requires d <= -1");
    const double ax = std::abs(x);
    const double den = x * x + 2.0 * d * x + 3.0 * ax + 4.0 * d * d;
    if (den <= 0.0) throw std::logic_error("f_of_x denominator not positive");
    return (x * x + 2.0 * d * x - ax) / den;
}

double delta_star_bruteforce(int d, int K, int* argmin_x) {
    if (K < 10) throw std::invalid_argument("K must be >= 10");
    const int period = 2 * (1 - d);
    double best = std::numeric_limits<double>::infinity();
    int best_x = 0;
    for (int k = -K; k <= K; ++k) {
        if (k == 0) continue;
        const double v = f_of_x(d, static_cast<double>(period) * k);
        if (v < best) {
            best = v;
            best_x = period * k;
        }
    }
    // Spot-check the derivative sign pattern that justifies restricting the
    // search to the two innermost offsets.
    const double h = 1e-6;
    for (int s = 1; s <= 20; ++s) {
        const double xr = period + s * 0.37 * period;  // x >= 2(1-d)
        if ((f_of_x(d, xr + h) - f_of_x(d, xr - h)) / (2.0 * h) < -1e-9)
            throw std::logic_error("f' sign pattern violated right of 2(1-d)");
        const double xl = -period - s * 0.37 * period;  // x <= -2(1-d)
        if ((f_of_x(d, xl + h) - f_of_x(d, xl - h)) / (2.0 * h) > 1e-9)
            throw std::logic_error("f' sign pattern violated left of -2(1-d)");
    }
    if (argmin_x) *argmin_x = best_x;
    return best;
}

ThresholdRecord delta0(int d) {
    if (d > -1) throw std::invalid_argument("delta0 requires d <= -1");
    ThresholdRecord rec;
    rec.d = d;
    rec.delta_star = (2.0 - 2.0 * d) / (4.0 * d * d + 10.0 - 10.0 * d);
    rec.argmin_x = 2 * (1 - d);
    rec.delta0 = std::min(rec.delta_star, 2.0 / std::sqrt(3.0) - 1.0);
    return rec;
}

std::string threshold_table_csv(const std::vector<int>& d_list, int brute_K) {
    std::ostringstream out;
    out << "d,delta_star,delta_star_bruteforce,delta0,argmin_x\n";
    for (int d : d_list) {
        const ThresholdRecord rec = delta0(d);
        int bx = 0;
        const double brute = delta_star_bruteforce(d, brute_K, &bx);
        out << d << "," << fmt_double(rec.delta_star) << "," << fmt_double(brute) << ","
            << fmt_double(rec.delta0) << "," << bx << "\n";
    }
    return out.str();
}

std::vector<CircleDiagnostics> circle_diagnostics(const Field2D& field, double delta,
                                                  const std::vector<double>& radii, int samples) {
    const FieldSampler sampler(field);
    std::vector<CircleDiagnostics> out;
    for (double r : radii) {
        if (r <= 0.0 || r > field.r_hi * (1.0 + 1e-12) || r < field.r_lo)
            throw std::invalid_argument("radius out of range");
        CircleDiagnostics row;
        row.r = r;
        double fint = 0.0, gint = 0.0, sig = 0.0;
        for (int l = 0; l < samples; ++l) {
            const double phi = 2.0 * M_PI * l / samples;
            const Vec2 u = sampler.value(r, phi);
            const Mat2 G = sampler.gradient(r, phi);
            const double grad2 = G.a * G.a + G.b * G.b + G.c * G.c + G.d * G.d;
            const double dv = G.a + G.d;
            const double m2 = u.norm2();
            const double W = 0.25 * (1.0 - m2) * (1.0 - m2);
            fint += 0.5 * (1.0 - delta) * grad2 + delta * dv * dv + W;
            gint += (1.0 - m2) * (1.0 - m2);
            sig = std::max(sig, std::abs(1.0 - u.norm()));
        }
        const double ds = r * 2.0 * M_PI / samples;
        row.f = r * fint * ds;
        row.g = r * gint * ds;
        row.sigma = sig;
        try {
            row.winding = winding_number(sampler.circle(r, std::max(samples, 256)));
        } catch (const std::exception&) {
            row.winding = std::nullopt;
        }
        out.push_back(row);
    }
    return out;
}

std::string diagnostics_csv(const std::vector<CircleDiagnostics>& rows) {
    std::ostringstream out;
    out << "r,f,g,sigma,winding\n";
    for (const auto& row : rows) {
        out << fmt_double(row.r) << "," << fmt_double(row.f) << "," << fmt_double(row.g) << ","
            << fmt_double(row.sigma) << ",";
        if (row.winding)
            out << *row.winding;
        else
            out << "undefined";
        out << "\n";
    }
    return out.str();
}

int degree_at_infinity(const Field2D& field, const std::vector<double>& fractions) {
    if (fractions.empty()) throw std::invalid_argument("no probe fractions");
    const FieldSampler sampler(field, false);
    int samples = 512;
    if (field.cls) {
        const int unit = 4 * field.cls->n();
        samples = unit * ((samples + unit - 1) / unit);
    }
    std::optional<int> common;
    for (double frac : fractions) {
        const int w = winding_number(sampler.circle(frac * field.r_hi, samples));
        if (common && *common != w)
            throw std::runtime_error("degree not stabilized: increase R");
        common = w;
    }
    if (field.cls && !degree_in_class(field.cls->d, *common))
        throw std::logic_error("winding outside the admissible degree class");
    return *common;
}

double nonradiality(const Field2D& field, double r, int samples) {
    if (r <= 0.0 || r > field.r_hi * (1.0 + 1e-12) || r < field.r_lo)
        throw std::invalid_argument("radius out of range");
    // Interpolate the scalar modulus, not the vector: a pure phase winding
    // between nodes must not register as amplitude variation.
    const double fi = std::min((r - field.r_lo) / field.dr(), static_cast<double>(field.nr));
    const int i0 = std::min(static_cast<int>(fi), field.nr - 1);
    const double t = fi - i0;
    const double dth = field.dtheta();
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int l = 0; l < samples; ++l) {
        const double fj = (2.0 * M_PI * l / samples) / dth;
        const int j0 = static_cast<int>(std::floor(fj));
        const double s = fj - j0;
        auto mod = [&](int i, int j) { return field.value(i, j).norm(); };
        const double m = (mod(i0, j0) * (1.0 - s) + mod(i0, j0 + 1) * s) * (1.0 - t) +
                         (mod(i0 + 1, j0) * (1.0 - s) + mod(i0 + 1, j0 + 1) * s) * t;
        lo = std::min(lo, m);
        hi = std::max(hi, m);
    }
    return hi - lo;
}

EnergyGrowthReport energy_growth_check(const std::vector<std::pair<double, double>>& R_energy,
                                       int d, double delta, int d_infinity, double tol_lo,
                                       double tol_hi) {
    if (R_energy.size() < 3) throw std::invalid_argument("need at least 3 radii");
    EnergyGrowthReport rep;
    rep.points = R_energy;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [R, E] : R_energy) {
        const double x = std::log(R);
        sx += x;
        sy += E;
        sxx += x * x;
        sxy += x * E;
    }
    const double m = static_cast<double>(R_energy.size());
    rep.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    rep.lower = (1.0 - tol_lo) * (1.0 - delta) * M_PI * d_infinity * d_infinity;
    rep.upper = (1.0 + tol_hi) * (1.0 + 3.0 * delta) * M_PI *
                (d * d + std::abs(d_infinity - d));
    rep.in_band = rep.slope >= rep.lower && rep.slope <= rep.upper;
    return rep;
}

}  // namespace agl
