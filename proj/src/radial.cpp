#include "agl/radial.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "agl/io_util.hpp"

namespace agl {

namespace {

double ode_residual_sup(const std::vector<double>& eta, double h, int d2) {
    double sup = 0.0;
    const int N = static_cast<int>(eta.size()) - 1;
    for (int i = 1; i < N; ++i) {
        const double r = i * h;
        const double res = (eta[i + 1] - 2.0 * eta[i] + eta[i - 1]) / (h * h) +
                           (eta[i + 1] - eta[i - 1]) / (2.0 * h * r) - d2 * eta[i] / (r * r) +
                           (1.0 - eta[i] * eta[i]) * eta[i];
        sup = std::max(sup, std::abs(res));
    }
    return sup;
}

void fill_diagnostics(RadialProfile& p, int d2) {
    const int N = p.segments();
    p.residual_sup = ode_residual_sup(p.eta, p.dr(), d2);
    p.boundary_defect = std::abs(1.0 - p.eta[N]);
    const double rs = 0.8 * p.r_max;
    p.far_field_gap = std::abs(p.eta_at(rs) - (1.0 - d2 / (2.0 * rs * rs)));
}

void validate_args(int d, double r_max, int N) {
    if (d == 0 || d >= 2) throw std::invalid_argument("radial profile requires d <= -1 or d = 1");
    if (r_max < 20.0 * std::abs(d)) throw std::invalid_argument("R_max must be >= 20 |d|");
    if (N < 512) throw std::invalid_argument("radial grid too coarse (N >= 512)");
}

}  // namespace

double RadialProfile::eta_at(double r) const {
    if (r < 0.0 || r > r_max * (1.0 + 1e-12))
        throw std::invalid_argument("grid exceeds profile support");
    const int N = segments();
    const double h = dr();
    const double fi = std::min(r / h, static_cast<double>(N));
    int i0 = static_cast<int>(fi) - 1;  // 4-point window [i0, i0+3]
    i0 = std::max(0, std::min(i0, N - 3));
    double out = 0.0;
    for (int k = 0; k < 4; ++k) {
        double lk = 1.0;
        for (int l = 0; l < 4; ++l)
            if (l != k) lk *= (fi - (i0 + l)) / static_cast<double>(k - l);
        out += lk * eta[i0 + k];
    }
    return out;
}

RadialProfile solve_radial_profile(int d, double r_max, int N, double tol) {
    validate_args(d, r_max, N);
    const int d2 = d * d;
    const double h = r_max / N;

    std::vector<double> eta(N + 1);
    for (int i = 0; i <= N; ++i) {
        const double r = i * h;
        eta[i] = r / std::sqrt(r * r + d2);
    }
    eta[0] = 0.0;
    eta[N] = 1.0;

    // Damped Newton on interior unknowns; tridiagonal Jacobian.
    std::vector<double> F(N - 1), lo(N - 1), di(N - 1), up(N - 1), step(N - 1);
    const int max_newton = 60;
    std::ostringstream trace;
    for (int it = 0; it < max_newton; ++it) {
        double fsup = 0.0;
        for (int i = 1; i < N; ++i) {
            const double r = i * h;
            F[i - 1] = (eta[i + 1] - 2.0 * eta[i] + eta[i - 1]) / (h * h) +
                       (eta[i + 1] - eta[i - 1]) / (2.0 * h * r) - d2 * eta[i] / (r * r) +
                       (1.0 - eta[i] * eta[i]) * eta[i];
            lo[i - 1] = 1.0 / (h * h) - 1.0 / (2.0 * h * r);
            di[i - 1] = -2.0 / (h * h) - d2 / (r * r) + 1.0 - 3.0 * eta[i] * eta[i];
            up[i - 1] = 1.0 / (h * h) + 1.0 / (2.0 * h * r);
            fsup = std::max(fsup, std::abs(F[i - 1]));
        }
        trace << "iter " << it << " |F|=" << fsup << "\n";
        if (fsup <= tol) {
            RadialProfile p;
            p.d = d;
            p.r_max = r_max;
            p.eta = std::move(eta);
            fill_diagnostics(p, d2);
            return p;
        }

        // Thomas algorithm for J step = -F.
        std::vector<double> cp(N - 1), dp(N - 1);
        cp[0] = up[0] / di[0];
        dp[0] = -F[0] / di[0];
        for (int i = 1; i < N - 1; ++i) {
            const double m = di[i] - lo[i] * cp[i - 1];
            cp[i] = up[i] / m;
            dp[i] = (-F[i] - lo[i] * dp[i - 1]) / m;
        }
        step[N - 2] = dp[N - 2];
        for (int i = N - 3; i >= 0; --i) step[i] = dp[i] - cp[i] * step[i + 1];

        double lambda = 1.0;
        bool improved = false;
        std::vector<double> cand(eta);
        for (int bt = 0; bt < 40; ++bt) {
            for (int i = 1; i < N; ++i) cand[i] = eta[i] + lambda * step[i - 1];
            if (ode_residual_sup(cand, h, d2) < fsup) {
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved)
            throw std::runtime_error("radial Newton diverged; trace:\n" + trace.str());
        eta.swap(cand);
    }
    throw std::runtime_error("radial Newton did not converge; trace:\n" + trace.str());
}

namespace {

/// RK4 integration of the profile ODE from the origin series with slope a;
/// returns eta sampled on the uniform N-grid.
std::vector<double> shoot(double a, int m, double r_max, int N, int steps_per_cell) {
    const double h = r_max / N;
    const double hs = h / steps_per_cell;
    std::vector<double> eta(N + 1, 0.0);
    // Series start at r0 = h: eta = a r^m (1 - r^2 / (4(m+1))).
    double r = h;
    double y = a * std::pow(r, m) * (1.0 - r * r / (4.0 * (m + 1)));
    double yp = a * (m * std::pow(r, m - 1) - (m + 2) * std::pow(r, m + 1) / (4.0 * (m + 1)));
    eta[1] = y;
    auto f2 = [&](double rr, double yy, double pp) {
        return -pp / rr + (m * m) * yy / (rr * rr) - (1.0 - yy * yy) * yy;
    };
    for (int i = 1; i < N; ++i) {
        for (int s = 0; s < steps_per_cell; ++s) {
            const double k1y = yp, k1p = f2(r, y, yp);
            const double k2y = yp + 0.5 * hs * k1p, k2p = f2(r + 0.5 * hs, y + 0.5 * hs * k1y, yp + 0.5 * hs * k1p);
            const double k3y = yp + 0.5 * hs * k2p, k3p = f2(r + 0.5 * hs, y + 0.5 * hs * k2y, yp + 0.5 * hs * k2p);
            const double k4y = yp + hs * k3p, k4p = f2(r + hs, y + hs * k3y, yp + hs * k3p);
            y += hs / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
            yp += hs / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
            r += hs;
            if (!std::isfinite(y) || std::abs(y) > 10.0) {
                // blown up: flag by filling the rest with the diverged value
                for (int k = i + 1; k <= N; ++k) eta[k] = y > 0 ? 10.0 : -10.0;
                return eta;
            }
        }
        eta[i + 1] = y;
    }
    return eta;
}

}  // namespace

RadialProfile solve_radial_shooting(int d, double r_max, int N, double tol) {
    validate_args(d, r_max, N);
    const int m = std::abs(d);
    // eta(R_max) is increasing in the slope a; bisect to the boundary value.
    double a_lo = 1e-3, a_hi = 2.0;
    auto end_val = [&](double a) { return shoot(a, m, r_max, N, 4).back() - 1.0; };
    if (end_val(a_lo) > 0.0 || end_val(a_hi) < 0.0)
        throw std::runtime_error("shooting bracket failed");
    for (int it = 0; it < 200; ++it) {
        const double a = 0.5 * (a_lo + a_hi);
        const double v = end_val(a);
        if (std::abs(v) <= tol || a_hi - a_lo < 1e-15) break;
        (v > 0.0 ? a_hi : a_lo) = a;
    }
    const double a = 0.5 * (a_lo + a_hi);
    RadialProfile p;
    p.d = d;
    p.r_max = r_max;
    p.eta = shoot(a, m, r_max, N, 4);
    p.eta[0] = 0.0;
    fill_diagnostics(p, d * d);
    return p;
}

namespace {
Field2D fill_radial(Field2D f, const RadialProfile& profile, int d, const Vec2& alpha,
                    double scale) {
    if (f.r_hi > scale * profile.r_max * (1.0 + 1e-12))
        throw std::invalid_argument("grid exceeds profile support");
    for (int i = 0; i <= f.nr; ++i) {
        const double amp = i == 0 ? 0.0 : profile.eta_at(f.node_r(i) / scale);
        for (int j = 0; j < f.ncols; ++j) {
            const Vec2 phase = polar_unit(d * f.node_theta(j));
            f.at(i, j) = complex_mul(alpha, phase) * amp;
        }
    }
    if (f.has_origin()) f.set_origin(Vec2{});
    return f;
}
}  // namespace

Field2D radial_sector_field(const RadialProfile& profile, const SymmetryClass& cls,
                            const Vec2& alpha, double scale, double R, int Nr, int Ntheta) {
    return fill_radial(Field2D::sector(cls, R, Nr, Ntheta), profile, cls.d, alpha, scale);
}

Field2D radial_disk_field(const RadialProfile& profile, int d, const Vec2& alpha, double scale,
                          double R, int Nr, int Mtheta) {
    return fill_radial(Field2D::disk(R, Nr, Mtheta), profile, d, alpha, scale);
}

std::string profile_to_csv(const RadialProfile& p, double tol) {
    std::ostringstream out;
    out << "# d=" << p.d << " R_max=" << fmt_double(p.r_max) << " N=" << p.segments()
        << " tol=" << fmt_double(tol) << "\n";
    out << "r,eta\n";
    for (int i = 0; i <= p.segments(); ++i)
        out << fmt_double(i * p.dr()) << "," << fmt_double(p.eta[i]) << "\n";
    return out.str();
}

void write_profile_csv(const RadialProfile& p, double tol, const std::string& path) {
    atomic_write(path, profile_to_csv(p, tol));
}

}  // namespace agl
