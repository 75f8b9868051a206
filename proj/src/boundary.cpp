#include "agl/boundary.hpp"

#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "agl/io_util.hpp"

namespace agl {

double BoundaryPhase::psi_at(int m) const {
    const int M_ = M();
    int q = 0, mm = m;
    while (mm < 0) {
        mm += M_;
        --q;
    }
    while (mm >= M_) {
        mm -= M_;
        ++q;
    }
    return psi[mm] + q * 2.0 * M_PI * d;
}

BoundaryPhase BoundaryPhase::pure_winding(int d, Sign sign, int M) {
    BoundaryPhase p;
    p.d = d;
    p.sign = sign;
    p.psi.resize(M);
    for (int m = 0; m < M; ++m) p.psi[m] = d * (2.0 * M_PI * m / M);
    return p;
}

namespace {

void check_sampling(const BoundaryPhase& phase) {
    const int n = 1 - phase.d;
    if (phase.M() < 8 * n) throw std::invalid_argument("undersampled phase");
}

double delta_signed(const BoundaryPhase& phase, double delta) {
    return phase.sign == Sign::plus ? delta : -delta;
}

}  // namespace

double circle_energy(const BoundaryPhase& phase, double delta) {
    check_sampling(phase);
    const int M = phase.M();
    const double dth = 2.0 * M_PI / M;
    const double sd = delta_signed(phase, delta);
    double total = 0.0;
    for (int m = 0; m < M; ++m) {
        const double dpsi = (phase.psi_at(m + 1) - phase.psi_at(m - 1)) / (2.0 * dth);
        const double theta = m * dth;
        total += 0.5 * dpsi * dpsi * (1.0 + sd * std::cos(2.0 * theta - 2.0 * phase.psi[m]));
    }
    return total * dth;
}

double circle_el_residual(const BoundaryPhase& phase, double delta) {
    check_sampling(phase);
    const int M = phase.M();
    const double dth = 2.0 * M_PI / M;
    const double sd = delta_signed(phase, delta);
    std::vector<double> F(M);
    for (int m = 0; m < M; ++m) {
        const double dpsi = (phase.psi_at(m + 1) - phase.psi_at(m - 1)) / (2.0 * dth);
        F[m] = dpsi * (1.0 + sd * std::cos(2.0 * m * dth - 2.0 * phase.psi[m]));
    }
    double sup = 0.0;
    for (int m = 0; m < M; ++m) {
        const double dpsi = (phase.psi_at(m + 1) - phase.psi_at(m - 1)) / (2.0 * dth);
        const double res = (F[(m + 1) % M] - F[(m + M - 1) % M]) / (2.0 * dth) -
                           sd * std::sin(2.0 * m * dth - 2.0 * phase.psi[m]) * dpsi * dpsi;
        sup = std::max(sup, std::abs(res));
    }
    return sup;
}

namespace {

struct NewtonOptions {
    double grad_tol = 1e-12;
    int max_iters = 120;
};

struct NewtonResult {
    std::vector<double> x;
    double energy = 0.0;
    double grad_sup = 0.0;
    int iterations = 0;
    bool converged = false;
};

double sup_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double a : v) s = std::max(s, std::abs(a));
    return s;
}

/// Solve A x = b in place by Gaussian elimination with partial pivoting.
bool dense_solve(std::vector<double> A, std::vector<double> b, int n, std::vector<double>& x) {
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(A[r * n + c]) > std::abs(A[piv * n + c])) piv = r;
        if (std::abs(A[piv * n + c]) < 1e-300) return false;
        if (piv != c) {
            for (int k = 0; k < n; ++k) std::swap(A[c * n + k], A[piv * n + k]);
            std::swap(b[c], b[piv]);
        }
        for (int r = c + 1; r < n; ++r) {
            const double f = A[r * n + c] / A[c * n + c];
            for (int k = c; k < n; ++k) A[r * n + k] -= f * A[c * n + k];
            b[r] -= f * b[c];
        }
    }
    x.assign(n, 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int k = r + 1; k < n; ++k) s -= A[r * n + k] * x[k];
        x[r] = s / A[r * n + r];
    }
    return true;
}

/// Damped Newton on the energy with a forward-difference Hessian of the
/// analytic gradient; Levenberg shifts keep the step a descent direction.
template <typename Eval>
NewtonResult newton_minimize(std::vector<double> x0, Eval&& eval, const NewtonOptions& opt) {
    const int n = static_cast<int>(x0.size());
    NewtonResult res;
    res.x = std::move(x0);
    std::vector<double> g(n), gp(n), xt(n), step(n);
    res.energy = eval(res.x, g);
    res.grad_sup = sup_norm(g);
    if (n == 0) {
        res.converged = true;
        return res;
    }
    for (int it = 0; it < opt.max_iters; ++it) {
        if (res.grad_sup <= opt.grad_tol) {
            res.converged = true;
            return res;
        }
        const double hfd = 1e-7 * std::max(1.0, sup_norm(res.x));
        std::vector<double> H(static_cast<size_t>(n) * n);
        for (int c = 0; c < n; ++c) {
            xt = res.x;
            xt[c] += hfd;
            eval(xt, gp);
            for (int r = 0; r < n; ++r) H[r * static_cast<size_t>(n) + c] = (gp[r] - g[r]) / hfd;
        }
        for (int r = 0; r < n; ++r)  // symmetrize
            for (int c = r + 1; c < n; ++c) {
                const double v = 0.5 * (H[r * static_cast<size_t>(n) + c] +
                                        H[c * static_cast<size_t>(n) + r]);
                H[r * static_cast<size_t>(n) + c] = v;
                H[c * static_cast<size_t>(n) + r] = v;
            }
        double diag_scale = 0.0;
        for (int r = 0; r < n; ++r)
            diag_scale = std::max(diag_scale, std::abs(H[r * static_cast<size_t>(n) + r]));

        bool accepted = false;
        for (double mu = 0.0; mu <= 1e6 * diag_scale;
             mu = (mu == 0.0 ? 1e-8 * diag_scale : 10.0 * mu)) {
            std::vector<double> Hs = H;
            for (int r = 0; r < n; ++r) Hs[r * static_cast<size_t>(n) + r] += mu;
            std::vector<double> rhs(n);
            for (int r = 0; r < n; ++r) rhs[r] = -g[r];
            if (!dense_solve(Hs, rhs, n, step)) continue;
            double slope = 0.0;
            for (int r = 0; r < n; ++r) slope += g[r] * step[r];
            if (slope >= 0.0) continue;
            double t = 1.0;
            for (int bt = 0; bt < 40; ++bt) {
                for (int r = 0; r < n; ++r) xt[r] = res.x[r] + t * step[r];
                const double et = eval(xt, gp);
                // Accept on energy decrease or, at the roundoff floor, on
                // gradient decrease.
                if (std::isfinite(et) &&
                    (et < res.energy || (et <= res.energy && sup_norm(gp) < res.grad_sup))) {
                    res.x = xt;
                    res.energy = et;
                    g = gp;
                    res.grad_sup = sup_norm(g);
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if (accepted) break;
        }
        res.iterations = it + 1;
        if (!accepted) return res;  // stalled below the floor
    }
    res.converged = res.grad_sup <= opt.grad_tol;
    return res;
}

/// Expansion of the free correction samples phi_p (p = 1..K-1, where
/// K = M/(4n)) to the full grid: phi is odd about theta = 0, pi/n-periodic,
/// hence odd about pi/(2n) as well; phi(0) = phi(pi/(2n)) = 0.
struct PhaseSpace {
    int M, n, period, K;

    explicit PhaseSpace(int d, int M_) : M(M_), n(1 - d) {
        if (M % (4 * n) != 0) throw std::invalid_argument("M must be a multiple of 4n");
        period = M / (2 * n);
        K = period / 2;
    }

    int free_count() const { return K - 1; }

    std::vector<double> expand(const std::vector<double>& free) const {
        std::vector<double> phi(M, 0.0);
        for (int m = 0; m < M; ++m) {
            const int p = m % period;
            if (p == 0 || p == K) continue;
            phi[m] = p < K ? free[p - 1] : -free[period - p - 1];
        }
        return phi;
    }

    /// Accumulate a full-grid gradient into the free coordinates.
    std::vector<double> reduce(const std::vector<double>& g_full) const {
        std::vector<double> g(free_count(), 0.0);
        for (int m = 0; m < M; ++m) {
            const int p = m % period;
            if (p == 0 || p == K) continue;
            if (p < K)
                g[p - 1] += g_full[m];
            else
                g[period - p - 1] -= g_full[m];
        }
        return g;
    }
};

}  // namespace

CircleMinimizeResult minimize_circle(int d, Sign sign, double delta, int M, double tol) {
    if (d > -1) throw std::invalid_argument("minimize_circle requires d <= -1");
    if (std::abs(delta) >= 1.0) throw std::invalid_argument("|delta| must be < 1");
    if (tol <= 0.0) throw std::invalid_argument("tol must be positive");
    const PhaseSpace space(d, M);
    const double dth = 2.0 * M_PI / M;
    const double sd = sign == Sign::plus ? delta : -delta;

    BoundaryPhase work = BoundaryPhase::pure_winding(d, sign, M);

    auto eval = [&](const std::vector<double>& x, std::vector<double>& grad) {
        const std::vector<double> phi = space.expand(x);
        for (int m = 0; m < M; ++m) work.psi[m] = d * (m * dth) + phi[m];
        std::vector<double> dpsi(M), F(M), g_full(M);
        double energy = 0.0;
        for (int m = 0; m < M; ++m) {
            dpsi[m] = (work.psi_at(m + 1) - work.psi_at(m - 1)) / (2.0 * dth);
            const double c = std::cos(2.0 * m * dth - 2.0 * work.psi[m]);
            F[m] = dpsi[m] * (1.0 + sd * c);
            energy += 0.5 * dpsi[m] * dpsi[m] * (1.0 + sd * c);
        }
        for (int m = 0; m < M; ++m) {
            const double s = std::sin(2.0 * m * dth - 2.0 * work.psi[m]);
            g_full[m] = dth * ((F[(m + M - 1) % M] - F[(m + 1) % M]) / (2.0 * dth) +
                               sd * dpsi[m] * dpsi[m] * s);
        }
        grad = space.reduce(g_full);
        return energy * dth;
    };

    const int nfree = space.free_count();
    std::vector<std::vector<double>> starts;
    starts.emplace_back(nfree, 0.0);
    for (const double a : {0.2, -0.2}) {
        std::vector<double> s(nfree);
        const int n = 1 - d;
        for (int p = 1; p < space.K; ++p) s[p - 1] = a * std::sin(2.0 * n * p * dth);
        starts.push_back(std::move(s));
    }

    // The free problem is small and smooth: damped Newton with a
    // finite-difference Hessian of the analytic gradient reaches
    // machine-level stationarity in a handful of steps.
    const double gtol = 0.5 * tol * dth;  // full residual sup = free-gradient sup / dth
    NewtonOptions nopt;
    nopt.grad_tol = gtol;
    nopt.max_iters = 120;

    CircleMinimizeResult out;
    std::optional<NewtonResult> best;      // best converged start
    std::optional<NewtonResult> best_any;  // best iterate overall, for failure payloads
    for (auto& x0 : starts) {
        const NewtonResult r = newton_minimize(x0, eval, nopt);
        out.start_values.push_back(r.energy);
        if (!best_any || r.energy < best_any->energy) best_any = r;
        if (r.converged && (!best || r.energy < best->energy)) best = r;
    }
    if (!best) {
        std::ostringstream msg;
        msg << "circle minimization did not converge (d=" << d << " sign=" << to_string(sign)
            << " delta=" << delta << " M=" << M << ")";
        const std::vector<double> phi = space.expand(best_any->x);
        BoundaryPhase bp = BoundaryPhase::pure_winding(d, sign, M);
        for (int m = 0; m < M; ++m) bp.psi[m] += phi[m];
        throw CircleSolveFailure(msg.str(), std::move(bp));
    }
    for (double v : out.start_values)
        if (std::abs(v - best->energy) > std::max(1e-9, 10.0 * tol)) out.start_disagreement = true;

    const std::vector<double> phi = space.expand(best->x);
    out.phase = BoundaryPhase::pure_winding(d, sign, M);
    for (int m = 0; m < M; ++m) out.phase.psi[m] += phi[m];
    out.energy.value = circle_energy(out.phase, delta);
    out.energy.el_residual = circle_el_residual(out.phase, delta);
    out.iterations = best->iterations;
    return out;
}

CircleTrace boundary_field(const BoundaryPhase& phase) {
    CircleTrace t;
    t.radius = 1.0;
    t.samples.resize(phase.M());
    const Vec2 a = phase.alpha();
    for (int m = 0; m < phase.M(); ++m)
        t.samples[m] = complex_mul(a, polar_unit(phase.psi[m]));
    return t;
}

std::string phase_to_csv(const BoundaryPhase& phase, double delta, double C) {
    std::ostringstream out;
    out << "# d=" << phase.d << " sign=" << to_string(phase.sign) << " delta=" << fmt_double(delta)
        << " M=" << phase.M() << " C=" << fmt_double(C) << "\n";
    out << "theta,psi,u1,u2\n";
    const Vec2 a = phase.alpha();
    for (int m = 0; m < phase.M(); ++m) {
        const double theta = 2.0 * M_PI * m / phase.M();
        const Vec2 u = complex_mul(a, polar_unit(phase.psi[m]));
        out << fmt_double(theta) << "," << fmt_double(phase.psi[m]) << "," << fmt_double(u.x)
            << "," << fmt_double(u.y) << "\n";
    }
    return out.str();
}

void write_phase_csv(const BoundaryPhase& phase, double delta, double C, const std::string& path) {
    atomic_write(path, phase_to_csv(phase, delta, C));
}

BoundaryPhase phase_from_csv(const std::string& content, double* delta_out, double* C_out) {
    std::istringstream in(content);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty phase file");
    const auto hdr = parse_header(line);
    for (const char* key : {"d", "sign", "delta", "M", "C"})
        if (!hdr.count(key)) throw std::runtime_error(std::string("phase header missing ") + key);
    BoundaryPhase p;
    p.d = std::stoi(hdr.at("d"));
    p.sign = sign_from_string(hdr.at("sign"));
    const int M = std::stoi(hdr.at("M"));
    if (delta_out) *delta_out = std::stod(hdr.at("delta"));
    if (C_out) *C_out = std::stod(hdr.at("C"));
    std::getline(in, line);  // column header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto tok = split(line, ',');
        if (tok.size() != 4) throw std::runtime_error("malformed phase row: " + line);
        p.psi.push_back(std::strtod(tok[1].c_str(), nullptr));
    }
    if (p.M() != M) throw std::runtime_error("phase row count does not match header M");
    return p;
}

}  // namespace agl
