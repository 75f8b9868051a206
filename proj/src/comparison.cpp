#include "agl/comparison.hpp"

#include <cmath>
#include <stdexcept>

namespace agl {

ComparisonMapSpec ComparisonMapSpec::make(int d, int N, double epsilon) {
    ComparisonMapSpec s;
    s.d = d;
    s.N = N;
    s.epsilon = epsilon;
    s.rho = N == 0 ? 0.25 : 1.0 / (16.0 * N * (1 - d));
    s.validate();
    return s;
}

void ComparisonMapSpec::validate() const {
    if (d > -1) throw std::invalid_argument("comparison map requires d <= -1");
    if (N < 0) throw std::invalid_argument("N must be nonnegative");
    if (epsilon <= 0.0 || epsilon >= epsilon_max)
        throw std::invalid_argument("epsilon outside (0, epsilon_max)");
    if (rho <= 0.0) throw std::invalid_argument("rho must be positive");
    const auto vs = vortices();
    for (size_t a = 0; a < vs.size(); ++a) {
        if (vs[a].first.norm() + 2.0 * rho > 0.5 + 1e-12)
            throw std::invalid_argument("vortex disks leave the half disk");
        for (size_t b = a + 1; b < vs.size(); ++b)
            if ((vs[a].first - vs[b].first).norm() < 4.0 * rho - 1e-12)
                throw std::invalid_argument("vortex disks overlap");
    }
}

std::vector<std::pair<Vec2, int>> ComparisonMapSpec::vortices() const {
    std::vector<std::pair<Vec2, int>> out;
    out.emplace_back(Vec2{0.0, 0.0}, d);
    const int n = 1 - d;
    for (int j = 1; j <= N; ++j) {
        const double lambda = static_cast<double>(j) / (4.0 * N);
        for (int k = 0; k < 2 * n; ++k) {
            const double ang = k * M_PI / n;
            out.emplace_back(unit_radial(ang) * lambda, 1);
        }
    }
    return out;
}

namespace {

/// Amplitude, its gradient, total phase and its gradient at x.
struct MapState {
    double amp = 1.0;
    Vec2 damp{};
    double phase = 0.0;
    Vec2 dphase{};
};

MapState evaluate(const ComparisonMapSpec& spec, const Vec2& x) {
    MapState st;
    const double collar = spec.collar_radius();
    for (const auto& [a, deg] : spec.vortices()) {
        const Vec2 z = x - a;
        const double r = z.norm();
        if (r < collar) {
            st.amp = r / collar;
            st.damp = r > 0.0 ? z * (1.0 / (collar * r)) : Vec2{};
        }
        st.phase += deg * std::atan2(z.y, z.x);
        if (r > 0.0) st.dphase += Vec2{-z.y, z.x} * (deg / (r * r));
    }
    return st;
}

}  // namespace

Vec2 comparison_value(const ComparisonMapSpec& spec, const Vec2& x) {
    const MapState st = evaluate(spec, x);
    return polar_unit(st.phase) * st.amp;
}

Field2D construct_comparison(const ComparisonMapSpec& spec, int Nr, int Ntheta) {
    spec.validate();
    const SymmetryClass cls(spec.d, Sign::plus);
    Field2D f = Field2D::sector(cls, 0.5, Nr, Ntheta);
    for (int i = 1; i <= Nr; ++i)
        for (int j = 0; j < Ntheta; ++j)
            f.at(i, j) = comparison_value(spec, unit_radial(f.node_theta(j)) * f.node_r(i));
    f.set_origin(Vec2{});
    return f;
}

namespace {

double density(const ComparisonMapSpec& spec, double delta, double inv_eps2, const Vec2& x) {
    const MapState st = evaluate(spec, x);
    const double co = std::cos(st.phase), si = std::sin(st.phase);
    // grad u for u = amp * (cos phase, sin phase)
    const Vec2 gu1 = st.damp * co - st.dphase * (st.amp * si);
    const Vec2 gu2 = st.damp * si + st.dphase * (st.amp * co);
    const double grad2 = gu1.norm2() + gu2.norm2();
    const double div = gu1.x + gu2.y;
    const double w = 0.25 * (1.0 - st.amp * st.amp) * (1.0 - st.amp * st.amp);
    return 0.5 * (1.0 - delta) * grad2 + delta * div * div + inv_eps2 * w;
}

/// Integral over the punctured vortex disk D_rho(a) by a collar grid plus a
/// geometric radial grid (midpoint in ln r), both uniform in angle.
double vortex_disk_energy(const ComparisonMapSpec& spec, double delta, const Vec2& a,
                          int collar_nodes) {
    const double inv_eps2 = 1.0 / (spec.epsilon * spec.epsilon);
    const double collar = spec.collar_radius();
    const double rho = spec.N == 0 ? 0.5 : spec.rho;  // N = 0: collar grid reaches the rim
    const int ma = 192;
    double total = 0.0;

    for (int k = 0; k < collar_nodes; ++k) {  // uniform midpoint on [0, collar]
        const double r = (k + 0.5) * collar / collar_nodes;
        double ring = 0.0;
        for (int l = 0; l < ma; ++l)
            ring += density(spec, delta, inv_eps2, a + unit_radial(2.0 * M_PI * l / ma) * r);
        total += ring * r * (collar / collar_nodes) * (2.0 * M_PI / ma);
    }

    const double t0 = std::log(collar), t1 = std::log(rho);
    const int kt = std::max(32, static_cast<int>(96.0 * (t1 - t0) / std::log(10.0)));
    const double dt = (t1 - t0) / kt;
    for (int k = 0; k < kt; ++k) {  // midpoint in t = ln r, Jacobian r^2
        const double r = std::exp(t0 + (k + 0.5) * dt);
        double ring = 0.0;
        for (int l = 0; l < ma; ++l)
            ring += density(spec, delta, inv_eps2, a + unit_radial(2.0 * M_PI * l / ma) * r);
        total += ring * r * r * dt * (2.0 * M_PI / ma);
    }
    return total;
}

}  // namespace

double comparison_energy(const ComparisonMapSpec& spec, double delta, int collar_nodes) {
    spec.validate();
    if (collar_nodes < 8) throw std::runtime_error("unresolved collar");
    double total = 0.0;
    const auto vs = spec.vortices();
    for (const auto& [a, deg] : vs) total += vortex_disk_energy(spec, delta, a, collar_nodes);
    if (spec.N == 0) return total;  // single vortex disk already covers D_{1/2}

    // Exterior of the vortex disks: global polar grid with hole masking. The
    // integrand there has no epsilon dependence, so its quadrature error is a
    // constant offset that cancels in the ln(1/eps) slope.
    const double inv_eps2 = 1.0 / (spec.epsilon * spec.epsilon);
    const int nr = 600, ma = 720;
    for (int k = 0; k < nr; ++k) {
        const double r = (k + 0.5) * 0.5 / nr;
        double ring = 0.0;
        for (int l = 0; l < ma; ++l) {
            const Vec2 x = unit_radial(2.0 * M_PI * l / ma) * r;
            bool inside = false;
            for (const auto& [a, deg] : vs)
                if ((x - a).norm() < spec.rho) {
                    inside = true;
                    break;
                }
            if (!inside) ring += density(spec, delta, inv_eps2, x);
        }
        total += ring * r * (0.5 / nr) * (2.0 * M_PI / ma);
    }
    return total;
}

ComparisonCurve comparison_energy_curve(int d, int N, const std::vector<double>& eps_list,
                                        double delta, int collar_nodes) {
    if (collar_nodes < 8) throw std::runtime_error("unresolved collar");
    ComparisonCurve out;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (double eps : eps_list) {
        const auto spec = ComparisonMapSpec::make(d, N, eps);
        const double e = comparison_energy(spec, delta, collar_nodes);
        out.points.emplace_back(eps, e);
        const double x = std::log(1.0 / eps);
        sx += x;
        sy += e;
        sxx += x * x;
        sxy += x * e;
    }
    const double m = static_cast<double>(eps_list.size());
    if (m < 2) throw std::invalid_argument("need at least two epsilon values");
    out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return out;
}

Field2D annulus_interpolation(const CircleTrace& outer, int inner_degree, Sign sign, int Nr) {
    const int M = static_cast<int>(outer.samples.size());
    const int w = winding_number(outer, 0.5);  // throws when the degree is undefined
    if (w != inner_degree)
        throw std::invalid_argument("outer trace winding does not match inner degree");
    const double R = outer.radius;
    const Vec2 alpha = sign == Sign::plus ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
    const Vec2 alpha_inv = sign == Sign::plus ? Vec2{1.0, 0.0} : Vec2{0.0, -1.0};

    // Lift the trace: alpha^{-1} u = rho_k e^{i (D theta + phi_k)}, with the
    // phase accumulated by principal-branch steps from sample 0.
    std::vector<double> rho_k(M), phi_k(M);
    double carry = 0.0;
    Vec2 prev{1.0, 0.0};
    for (int m = 0; m < M; ++m) {
        const Vec2 z = complex_mul(alpha_inv, outer.samples[m]);
        rho_k[m] = z.norm();
        carry += std::atan2(prev.cross(z), prev.dot(z));
        phi_k[m] = carry - inner_degree * (2.0 * M_PI * m / M);
        prev = z;
    }

    Field2D f = Field2D::annulus(R / 2.0, R, Nr, M);
    for (int i = 0; i <= Nr; ++i) {
        const double r = f.node_r(i);
        const double lam = std::log(2.0 * r / R) / std::log(2.0);
        for (int j = 0; j < M; ++j) {
            const double amp = 1.0 + lam * (rho_k[j] - 1.0);
            const double ph = inner_degree * (2.0 * M_PI * j / M) + lam * phi_k[j];
            f.at(i, j) = complex_mul(alpha, polar_unit(ph)) * amp;
        }
    }
    return f;
}

}  // namespace agl
