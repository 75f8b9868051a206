#include "agl/lbfgs.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace agl {

namespace {
double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}
double sup_norm(const std::vector<double>& a) {
    double s = 0.0;
    for (double v : a) s = std::max(s, std::abs(v));
    return s;
}
}  // namespace

LbfgsResult lbfgs_minimize(
    std::vector<double> x0,
    const std::function<double(const std::vector<double>&, std::vector<double>&)>& eval,
    const LbfgsOptions& opt) {
    const size_t n = x0.size();
    std::vector<double> g(n), g_new(n), x_new(n), dir(n);
    struct Pair {
        std::vector<double> s, y;
        double rho;
    };
    std::deque<Pair> mem;

    LbfgsResult res;
    res.x = std::move(x0);
    res.energy = eval(res.x, g);
    res.grad_sup = sup_norm(g);
    double gamma = 1.0;

    auto apply_h0 = [&](std::vector<double>& q) {
        if (opt.precond.empty()) {
            for (double& v : q) v *= gamma;
        } else {
            for (size_t i = 0; i < n; ++i) q[i] *= gamma * opt.precond[i];
        }
    };

    for (int iter = 0; iter < opt.max_iters; ++iter) {
        if (res.grad_sup <= opt.grad_tol) {
            res.converged = true;
            return res;
        }

        // Two-loop recursion.
        dir = g;
        std::vector<double> alpha(mem.size());
        for (size_t k = mem.size(); k-- > 0;) {
            alpha[k] = mem[k].rho * dot(mem[k].s, dir);
            for (size_t i = 0; i < n; ++i) dir[i] -= alpha[k] * mem[k].y[i];
        }
        apply_h0(dir);
        for (size_t k = 0; k < mem.size(); ++k) {
            const double beta = mem[k].rho * dot(mem[k].y, dir);
            for (size_t i = 0; i < n; ++i) dir[i] += (alpha[k] - beta) * mem[k].s[i];
        }
        for (double& v : dir) v = -v;

        double slope = dot(g, dir);
        if (slope >= 0.0) {  // not a descent direction: restart from scaled steepest descent
            mem.clear();
            dir = g;
            apply_h0(dir);
            for (double& v : dir) v = -v;
            slope = dot(g, dir);
        }

        double t = 1.0;
        bool accepted = false;
        double e_new = res.energy;
        for (int bt = 0; bt < opt.max_backtracks; ++bt) {
            for (size_t i = 0; i < n; ++i) x_new[i] = res.x[i] + t * dir[i];
            e_new = eval(x_new, g_new);
            if (std::isfinite(e_new) && e_new <= res.energy + opt.c1 * t * slope) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            if (!mem.empty()) {  // one retry as plain preconditioned steepest descent
                mem.clear();
                continue;
            }
            res.line_search_failed = true;
            return res;
        }
        if (e_new > res.energy + 1e-12 * (1.0 + std::abs(res.energy)))
            throw std::logic_error("line search accepted a non-monotone step");

        Pair p;
        p.s.resize(n);
        p.y.resize(n);
        for (size_t i = 0; i < n; ++i) {
            p.s[i] = x_new[i] - res.x[i];
            p.y[i] = g_new[i] - g[i];
        }
        const double sy = dot(p.s, p.y);
        const double ss = dot(p.s, p.s), yy0 = dot(p.y, p.y);
        if (sy > 1e-10 * std::sqrt(ss * yy0) && sy > 0.0) {
            p.rho = 1.0 / sy;
            double yy;
            if (opt.precond.empty()) {
                yy = dot(p.y, p.y);
            } else {
                yy = 0.0;
                for (size_t i = 0; i < n; ++i) yy += p.y[i] * opt.precond[i] * p.y[i];
            }
            if (yy > 0.0) gamma = sy / yy;
            mem.push_back(std::move(p));
            if (static_cast<int>(mem.size()) > opt.memory) mem.pop_front();
        }

        res.x.swap(x_new);
        g.swap(g_new);
        res.energy = e_new;
        res.grad_sup = sup_norm(g);
        res.iterations = iter + 1;
        if (opt.on_accept) opt.on_accept(res.iterations, res.energy, res.grad_sup);
    }
    res.converged = res.grad_sup <= opt.grad_tol;
    return res;
}

}  // namespace agl
