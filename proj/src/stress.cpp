#include "agl/stress.hpp"

#include <cmath>
#include <stdexcept>

#include "agl/stencils.hpp"

namespace agl {

StressTensorField stress_tensor(const Field2D& field, double delta) {
    const Field2D f = extend_to_disk(field);
    f.check_shape(3, 4);
    const auto G = node_gradients(f);

    StressTensorField T;
    T.nr = f.nr;
    T.ncols = f.ncols;
    T.r_lo = f.r_lo;
    T.r_hi = f.r_hi;
    T.delta = delta;
    const size_t total = static_cast<size_t>(f.nr + 1) * f.ncols;
    T.t11.assign(total, 0.0);
    T.t12.assign(total, 0.0);
    T.t21.assign(total, 0.0);
    T.t22.assign(total, 0.0);
    T.w.assign(total, 0.0);
    T.div_curl.assign(total, 0.0);

    const int i_first = f.has_origin() ? 1 : 0;
    for (int i = i_first; i <= f.nr; ++i) {
        for (int j = 0; j < f.ncols; ++j) {
            const size_t k = T.idx(i, j);
            const Mat2& g = G[k];
            // g = [d1 u1, d2 u1; d1 u2, d2 u2]
            const double d1u1 = g.a, d2u1 = g.b, d1u2 = g.c, d2u2 = g.d;
            const double p1 = d1u1 * d1u1 + d1u2 * d1u2;  // |d1 u|^2
            const double p2 = d2u1 * d2u1 + d2u2 * d2u2;  // |d2 u|^2
            const double n1 = d1u1 * d1u1 + d2u1 * d2u1;  // |grad u1|^2
            const double n2 = d1u2 * d1u2 + d2u2 * d2u2;  // |grad u2|^2
            const double cross12 = d1u1 * d2u1 + d1u2 * d2u2;   // d1 u . d2 u
            const double grads12 = d1u1 * d1u2 + d2u1 * d2u2;   // grad u1 . grad u2
            const double dv = d1u1 + d2u2;
            const double cl = d1u2 - d2u1;
            const double m2 = f.at(i, j).norm2();
            const double W = 0.25 * (1.0 - m2) * (1.0 - m2);

            T.t11[k] = 0.5 * (p1 - p2) + 0.5 * delta * (n1 - n2) - W;
            T.t12[k] = cross12 + delta * grads12 + delta * dv * cl;
            T.t21[k] = cross12 + delta * grads12 - delta * dv * cl;
            T.t22[k] = 0.5 * (p2 - p1) + 0.5 * delta * (n2 - n1) - W;
            T.w[k] = W;
            T.div_curl[k] = dv * cl;
        }
    }
    return T;
}

double div_T_sup(const Field2D& field, double delta) {
    // Diagnostic pipeline with fourth-order stencils throughout: the 1/r
    // factors of the polar frame otherwise degrade the sup norm to first
    // order near the origin and hide the convergence this check measures.
    const Field2D f = extend_to_disk(field);
    f.check_shape(6, 4);
    const double dr = f.dr(), dth = f.dtheta();
    const int n = f.ncols;
    auto widx = [n](int j) { return ((j % n) + n) % n; };

    const size_t total = static_cast<size_t>(f.nr + 1) * n;
    std::vector<double> t11(total, 0.0), t12(total, 0.0), t21(total, 0.0), t22(total, 0.0);
    auto idx = [&](int i, int j) { return static_cast<size_t>(i) * n + widx(j); };

    for (int j = 0; j < n; ++j) {
        const double th = f.node_theta(j);
        const double co = std::cos(th), si = std::sin(th);
        for (int i = 1; i <= f.nr; ++i) {
            const double r = f.node_r(i);
            const Vec2 ur = line_d1_order4([&](int k) { return f.at(k, j); }, i, 0, f.nr, dr);
            const Vec2 ut =
                line_d1_order4_centered([&](int k) { return f.at(i, widx(k)); }, j, dth) *
                (1.0 / r);
            const Vec2 ux = ur * co - ut * si;  // (d1 u1, d1 u2)
            const Vec2 uy = ur * si + ut * co;  // (d2 u1, d2 u2)
            const double d1u1 = ux.x, d1u2 = ux.y, d2u1 = uy.x, d2u2 = uy.y;
            const double p1 = d1u1 * d1u1 + d1u2 * d1u2;
            const double p2 = d2u1 * d2u1 + d2u2 * d2u2;
            const double n1 = d1u1 * d1u1 + d2u1 * d2u1;
            const double n2 = d1u2 * d1u2 + d2u2 * d2u2;
            const double cross12 = d1u1 * d2u1 + d1u2 * d2u2;
            const double grads12 = d1u1 * d1u2 + d2u1 * d2u2;
            const double dv = d1u1 + d2u2, cl = d1u2 - d2u1;
            const double m2 = f.at(i, j).norm2();
            const double W = 0.25 * (1.0 - m2) * (1.0 - m2);
            const size_t k = idx(i, j);
            t11[k] = 0.5 * (p1 - p2) + 0.5 * delta * (n1 - n2) - W;
            t12[k] = cross12 + delta * grads12 + delta * dv * cl;
            t21[k] = cross12 + delta * grads12 - delta * dv * cl;
            t22[k] = 0.5 * (p2 - p1) + 0.5 * delta * (n2 - n1) - W;
        }
    }

    double sup = 0.0;
    for (int j = 0; j < n; ++j) {
        const double th = f.node_theta(j);
        const double co = std::cos(th), si = std::sin(th);
        for (int i = 1; i < f.nr; ++i) {
            const double r = f.node_r(i);
            auto cart = [&](const std::vector<double>& S, int which) {
                const double sr =
                    line_d1_order4([&](int k) { return S[idx(k, j)]; }, i, 1, f.nr, dr);
                const double st =
                    line_d1_order4_centered([&](int k) { return S[idx(i, k)]; }, j, dth) / r;
                return which == 1 ? co * sr - si * st : si * sr + co * st;
            };
            const double r1 = cart(t11, 1) + cart(t12, 2);
            const double r2 = cart(t21, 1) + cart(t22, 2);
            sup = std::max(sup, std::hypot(r1, r2));
        }
    }
    return sup;
}

PohozaevReport pohozaev(const Field2D& f, double delta, const Vec2& center, double radius,
                        int quadrature_order) {
    if (radius <= 0.0) throw std::invalid_argument("radius must be positive");
    const double cr = center.norm();
    if (cr + radius > f.r_hi * (1.0 + 1e-12) || (f.r_lo > 0.0 && cr - radius < f.r_lo))
        throw std::invalid_argument("disk exits domain");
    const int mq = std::max(16, quadrature_order);

    const FieldSampler sampler(f);

    PohozaevReport rep;
    rep.center = center;
    rep.radius = radius;
    rep.quadrature_order = mq;

    auto polar_of = [&](const Vec2& x) {
        return std::pair<double, double>{x.norm(), std::atan2(x.y, x.x)};
    };

    // Area integrals over D_radius(center): midpoint rings around the center.
    const int rings = std::max(8, mq / 2);
    double int_W = 0.0, int_dc = 0.0;
    for (int k = 0; k < rings; ++k) {
        const double s = (k + 0.5) * radius / rings;
        double ring_W = 0.0, ring_dc = 0.0;
        for (int l = 0; l < mq; ++l) {
            const double phi = 2.0 * M_PI * l / mq;
            const Vec2 x = center + unit_radial(phi) * s;
            const auto [r, th] = polar_of(x);
            const Vec2 u = sampler.value(r, th);
            const double m2 = u.norm2();
            ring_W += 0.25 * (1.0 - m2) * (1.0 - m2);
            const Mat2 G = sampler.gradient(r, th);
            ring_dc += (G.a + G.d) * (G.c - G.b);
        }
        const double dA = s * (radius / rings) * (2.0 * M_PI / mq);
        int_W += ring_W * dA;
        int_dc += ring_dc * dA;
    }
    rep.lhs1 = 2.0 * int_W;
    rep.lhs2 = 2.0 * delta * int_dc;

    // Circle integrals (with respect to arclength).
    double rhs1 = 0.0, rhs2 = 0.0;
    for (int l = 0; l < mq; ++l) {
        const double phi = 2.0 * M_PI * l / mq;
        const Vec2 er = unit_radial(phi), et = unit_tangential(phi);
        const Vec2 x = center + er * radius;
        const auto [r, th] = polar_of(x);
        const Vec2 u = sampler.value(r, th);
        const Mat2 G = sampler.gradient(r, th);
        const double m2 = u.norm2();
        const double W = 0.25 * (1.0 - m2) * (1.0 - m2);
        const Vec2 du_r = G.apply(er);   // derivative along e_r
        const Vec2 du_t = G.apply(et);   // derivative along e_theta
        const double dv = G.a + G.d, cl = G.c - G.b;
        rhs1 += W + 0.5 * (1.0 + delta) * du_t.dot(et) * du_t.dot(et) +
                0.5 * (1.0 - delta) * du_t.dot(er) * du_t.dot(er) -
                0.5 * (1.0 + delta) * du_r.dot(er) * du_r.dot(er) -
                0.5 * (1.0 - delta) * du_r.dot(et) * du_r.dot(et);
        const Vec2 grad_ur = G.transpose().apply(er);  // grad(u . e_r), frame frozen
        const Vec2 grad_ut = G.transpose().apply(et);
        rhs2 += delta * dv * cl - delta * grad_ur.dot(grad_ut) - du_r.dot(du_t);
    }
    const double ds = radius * 2.0 * M_PI / mq;
    rep.rhs1 = radius * rhs1 * ds;
    rep.rhs2 = radius * rhs2 * ds;

    rep.residual1 = std::abs(rep.lhs1 - rep.rhs1);
    rep.residual2 = std::abs(rep.lhs2 - rep.rhs2);
    rep.relative1 = rep.residual1 / std::max({1.0, std::abs(rep.lhs1), std::abs(rep.rhs1)});
    rep.relative2 = rep.residual2 / std::max({1.0, std::abs(rep.lhs2), std::abs(rep.rhs2)});
    return rep;
}

}  // namespace agl
