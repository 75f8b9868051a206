#include "agl/energy.hpp"

#include <cmath>
#include <stdexcept>

#include "agl/stencils.hpp"

namespace agl {

namespace {

struct NodeDerivs {
    Vec2 p;    // value
    Vec2 gr;   // radial derivative
    Vec2 gt;   // tangential derivative (1/r) d_theta u
    double co, si;

    double div() const { return co * gr.x - si * gt.x + si * gr.y + co * gt.y; }
    double curl() const { return co * gr.y - si * gt.y - si * gr.x - co * gt.x; }
    double grad2() const { return gr.norm2() + gt.norm2(); }
    double W() const {
        const double t = 1.0 - p.norm2();
        return 0.25 * t * t;
    }
};

NodeDerivs node_derivs(const Field2D& f, int i, int j) {
    NodeDerivs nd;
    const double dr = f.dr(), dth = f.dtheta();
    const double r = f.node_r(i), th = f.node_theta(j);
    nd.p = f.at(i, j);
    nd.co = std::cos(th);
    nd.si = std::sin(th);
    if (i == f.nr)
        nd.gr = (f.at(i, j) * 3.0 - f.at(i - 1, j) * 4.0 + f.at(i - 2, j)) * (1.0 / (2.0 * dr));
    else if (i == 0)
        nd.gr = (f.at(0, j) * -3.0 + f.at(1, j) * 4.0 - f.at(2, j)) * (1.0 / (2.0 * dr));
    else
        nd.gr = (f.at(i + 1, j) - f.at(i - 1, j)) * (1.0 / (2.0 * dr));
    nd.gt = (f.value(i, j + 1) - f.value(i, j - 1)) * (1.0 / (2.0 * dth * r));
    return nd;
}

template <typename Body>
void quadrature_loop(const Field2D& f, Body&& body) {
    f.check_shape(4, 4);
    const double dr = f.dr(), dth = f.dtheta();
    const int i_first = f.has_origin() ? 1 : 0;  // r = 0 carries zero weight
    for (int i = i_first; i <= f.nr; ++i) {
        const double r = f.node_r(i);
        const double wr = (i == 0 || i == f.nr) ? 0.5 : 1.0;
        const double w = f.turns * wr * r * dr * dth;
        for (int j = 0; j < f.ncols; ++j) body(i, j, w);
    }
}

}  // namespace

EnergyBreakdown energy_E(const Field2D& f, double delta) {
    EnergyBreakdown out;
    out.delta = delta;
    quadrature_loop(f, [&](int i, int j, double w) {
        const NodeDerivs nd = node_derivs(f, i, j);
        const double dv = nd.div();
        out.dirichlet += w * 0.5 * (1.0 - delta) * nd.grad2();
        out.div_term += w * delta * dv * dv;
        out.potential += w * nd.W();
    });
    out.total = out.dirichlet + out.div_term + out.potential;
    return out;
}

double energy_F(const Field2D& f, double delta) {
    double total = 0.0;
    quadrature_loop(f, [&](int i, int j, double w) {
        const NodeDerivs nd = node_derivs(f, i, j);
        const double dv = nd.div(), cl = nd.curl();
        total += w * (0.5 * nd.grad2() + 0.5 * delta * (dv * dv - cl * cl) + nd.W());
    });
    return total;
}

double integral_det_grad(const Field2D& f) {
    double total = 0.0;
    quadrature_loop(f, [&](int i, int j, double w) {
        const NodeDerivs nd = node_derivs(f, i, j);
        total += w * nd.gr.cross(nd.gt);
    });
    return total;
}

double potential_mass(const Field2D& f, double delta) {
    return 2.0 * energy_E(f, delta).potential;
}

Field2D el_residual(const Field2D& f, double delta) {
    // The 1/r and 1/r^2 factors of the polar operators amplify stencil
    // truncation near the origin, so first derivatives use fourth-order
    // windows; that keeps the residual of smooth exact solutions O(h^2) in
    // sup norm uniformly over the disk.
    f.check_shape(6, 4);
    const double dr = f.dr(), dth = f.dtheta();
    const int i_lo = 0;  // row 0 is exact data: the origin or the inner rim
    const int sgn = f.scalar_wrap_sign();

    // div u on nodes i in [1, nr]
    std::vector<double> D(static_cast<size_t>(f.nr + 1) * f.ncols, 0.0);
    for (int j = 0; j < f.ncols; ++j) {
        const double th = f.node_theta(j);
        const double co = std::cos(th), si = std::sin(th);
        for (int i = 1; i <= f.nr; ++i) {
            const double r = f.node_r(i);
            const Vec2 ur = line_d1_order4([&](int k) { return f.at(k, j); }, i, i_lo, f.nr, dr);
            const Vec2 ut =
                line_d1_order4_centered([&](int k) { return f.value(i, k); }, j, dth) * (1.0 / r);
            D[static_cast<size_t>(i) * f.ncols + j] = co * ur.x - si * ut.x + si * ur.y + co * ut.y;
        }
    }
    auto Dval = [&](int i, int j) {
        int q = 0, jj = j;
        while (jj < 0) {
            jj += f.ncols;
            --q;
        }
        while (jj >= f.ncols) {
            jj -= f.ncols;
            ++q;
        }
        const double v = D[static_cast<size_t>(i) * f.ncols + jj];
        return (q % 2 == 0) ? v : sgn * v;
    };

    Field2D out = f;
    for (auto& v : out.data) v = Vec2{};
    for (int j = 0; j < f.ncols; ++j) {
        const double th = f.node_theta(j);
        const double co = std::cos(th), si = std::sin(th);
        for (int i = 1; i < f.nr; ++i) {
            const double r = f.node_r(i);
            const Vec2 p = f.at(i, j);
            const Vec2 urr = (f.at(i + 1, j) - p * 2.0 + f.at(i - 1, j)) * (1.0 / (dr * dr));
            const Vec2 ur = line_d1_order4([&](int k) { return f.at(k, j); }, i, i_lo, f.nr, dr);
            const Vec2 utt =
                line_d2_order4_centered([&](int k) { return f.value(i, k); }, j, dth);
            const Vec2 lap = urr + ur * (1.0 / r) + utt * (1.0 / (r * r));
            // grad(div u); the D line starts at ring 1 (no origin value)
            const double Drad = line_d1_order4([&](int k) { return Dval(k, j); }, i, 1, f.nr, dr);
            const double Dtan =
                line_d1_order4_centered([&](int k) { return Dval(i, k); }, j, dth) / r;
            const Vec2 gradD{co * Drad - si * Dtan, si * Drad + co * Dtan};
            const Vec2 rhs = p * (p.norm2() - 1.0);
            out.at(i, j) = lap * (1.0 - delta) + gradD * (2.0 * delta) - rhs;
        }
    }
    return out;
}

double el_residual_sup(const Field2D& f, double delta) {
    const Field2D res = el_residual(f, delta);
    double sup = 0.0;
    for (const auto& v : res.data) sup = std::max(sup, v.norm());
    return sup;
}

static void require_solver_sector(const Field2D& f) {
    if (!f.has_origin()) throw std::invalid_argument("free DOFs require a centered patch");
    if (f.nr < 4) throw std::invalid_argument("degenerate grid");
}

int free_dof_count(const Field2D& sector) {
    require_solver_sector(sector);
    return (sector.nr - 1) * sector.ncols * 2;
}

std::vector<double> get_free_dofs(const Field2D& sector) {
    require_solver_sector(sector);
    std::vector<double> x;
    x.reserve(free_dof_count(sector));
    for (int i = 1; i < sector.nr; ++i)
        for (int j = 0; j < sector.ncols; ++j) {
            x.push_back(sector.at(i, j).x);
            x.push_back(sector.at(i, j).y);
        }
    return x;
}

void set_free_dofs(Field2D& sector, const std::vector<double>& x) {
    require_solver_sector(sector);
    if (static_cast<int>(x.size()) != free_dof_count(sector))
        throw std::invalid_argument("DOF vector size mismatch");
    size_t k = 0;
    for (int i = 1; i < sector.nr; ++i)
        for (int j = 0; j < sector.ncols; ++j) {
            sector.at(i, j).x = x[k++];
            sector.at(i, j).y = x[k++];
        }
}

std::vector<double> energy_gradient(const Field2D& f, double delta) {
    std::vector<double> grad;
    energy_value_and_gradient(f, delta, grad);
    return grad;
}

double energy_value_and_gradient(const Field2D& f, double delta, std::vector<double>& grad) {
    require_solver_sector(f);
    f.check_shape(4, 4);
    const double dr = f.dr(), dth = f.dtheta();
    grad.assign(free_dof_count(f), 0.0);
    double total = 0.0;

    auto scatter = [&](int i, int jt, const Vec2& contrib) {
        if (i < 1 || i >= f.nr) return;  // origin and boundary ring are fixed
        int q = 0, jj = jt;
        while (jj < 0) {
            jj += f.ncols;
            --q;
        }
        while (jj >= f.ncols) {
            jj -= f.ncols;
            ++q;
        }
        Vec2 c = contrib;
        // d/du(i,jj) of a term seen through u(i,jt) = R(q*twist) u(i,jj)
        if (q != 0) c = Mat2::rotation(-q * f.twist).apply(c);
        const size_t base = (static_cast<size_t>(i - 1) * f.ncols + jj) * 2;
        grad[base] += c.x;
        grad[base + 1] += c.y;
    };

    quadrature_loop(f, [&](int i, int j, double w) {
        const NodeDerivs nd = node_derivs(f, i, j);
        const double dv = nd.div();
        total += w * (0.5 * (1.0 - delta) * nd.grad2() + delta * dv * dv + nd.W());

        // Partials of the density with respect to (p, gr, gt).
        const Vec2 dp = nd.p * ((nd.p.norm2() - 1.0));  // dW/dp
        const Vec2 dgr = nd.gr * (1.0 - delta) + Vec2{nd.co, nd.si} * (2.0 * delta * dv);
        const Vec2 dgt = nd.gt * (1.0 - delta) + Vec2{-nd.si, nd.co} * (2.0 * delta * dv);

        scatter(i, j, dp * w);

        const Vec2 cr = dgr * (w / (2.0 * dr));
        if (i == f.nr) {
            scatter(i, j, cr * 3.0);
            scatter(i - 1, j, cr * -4.0);
            scatter(i - 2, j, cr);
        } else {  // interior (i = 0 never reaches here: zero weight at r = 0)
            scatter(i + 1, j, cr);
            scatter(i - 1, j, -cr);
        }

        const Vec2 ct = dgt * (w / (2.0 * dth * f.node_r(i)));
        scatter(i, j + 1, ct);
        scatter(i, j - 1, -ct);
    });
    return total;
}

std::vector<double> free_dof_weights(const Field2D& f) {
    require_solver_sector(f);
    std::vector<double> w(free_dof_count(f));
    const double dr = f.dr(), dth = f.dtheta();
    size_t k = 0;
    for (int i = 1; i < f.nr; ++i) {
        const double wi = f.turns * f.node_r(i) * dr * dth;
        for (int j = 0; j < f.ncols; ++j) {
            w[k++] = wi;
            w[k++] = wi;
        }
    }
    return w;
}

}  // namespace agl
