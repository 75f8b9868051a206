#include "agl/field.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "agl/io_util.hpp"

namespace agl {

Field2D Field2D::sector(const SymmetryClass& cls, double R, int Nr, int Ntheta) {
    Field2D f;
    f.r_lo = 0.0;
    f.r_hi = R;
    f.nr = Nr;
    f.ncols = Ntheta;
    f.turns = 2 * cls.n();
    f.span = M_PI / cls.n();
    f.twist = cls.d * M_PI / cls.n();
    f.cls = cls;
    f.data.assign(static_cast<size_t>(Nr + 1) * Ntheta, Vec2{});
    return f;
}

Field2D Field2D::disk(double R, int Nr, int Mtheta) {
    Field2D f;
    f.r_lo = 0.0;
    f.r_hi = R;
    f.nr = Nr;
    f.ncols = Mtheta;
    f.turns = 1;
    f.span = 2.0 * M_PI;
    f.twist = 0.0;
    f.data.assign(static_cast<size_t>(Nr + 1) * Mtheta, Vec2{});
    return f;
}

Field2D Field2D::annulus(double r_lo, double r_hi, int Nr, int Mtheta) {
    Field2D f = disk(r_hi, Nr, Mtheta);
    f.r_lo = r_lo;
    return f;
}

Field2D Field2D::twisted_patch(double R, int Nr, int Ntheta, int turns, double twist) {
    Field2D f;
    f.r_lo = 0.0;
    f.r_hi = R;
    f.nr = Nr;
    f.ncols = Ntheta;
    f.turns = turns;
    f.span = 2.0 * M_PI / turns;
    f.twist = twist;
    f.data.assign(static_cast<size_t>(Nr + 1) * Ntheta, Vec2{});
    return f;
}

int Field2D::scalar_wrap_sign() const {
    // mu(step) = R(twist) equals the step rotation R(span) or sigma R(span).
    const double diff = std::remainder(twist - span, 2.0 * M_PI);
    if (std::abs(diff) < 1e-12) return 1;
    if (std::abs(std::abs(diff) - M_PI) < 1e-12) return -1;
    throw std::logic_error("patch twist is neither periodic nor antiperiodic");
}

static int floor_div(int a, int b) {
    int q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

Vec2 Field2D::value(int i, int j) const {
    const int q = floor_div(j, ncols);
    const int jj = j - q * ncols;
    const Vec2& v = at(i, jj);
    if (q == 0) return v;
    return Mat2::rotation(q * twist).apply(v);
}

void Field2D::set_origin(const Vec2& v) {
    for (int j = 0; j < ncols; ++j) at(0, j) = v;
}

void Field2D::check_shape(int min_nr, int min_ncols) const {
    if (nr < min_nr || ncols < min_ncols) throw std::invalid_argument("degenerate grid");
}

Field2D extend_to_disk(const Field2D& f) {
    if (f.turns == 1) return f;
    Field2D out = Field2D::disk(f.r_hi, f.nr, f.ncols * f.turns);
    out.r_lo = f.r_lo;
    out.delta_meta = f.delta_meta;
    for (int i = 0; i <= f.nr; ++i)
        for (int j = 0; j < out.ncols; ++j) out.at(i, j) = f.value(i, j);
    return out;
}

Field2D restrict_to_sector(const Field2D& disk, const SymmetryClass& cls) {
    if (disk.turns != 1) throw std::invalid_argument("restrict_to_sector expects a disk field");
    const int turns = 2 * cls.n();
    if (disk.ncols % turns != 0) throw std::invalid_argument("grid/group mismatch");
    Field2D out = Field2D::sector(cls, disk.r_hi, disk.nr, disk.ncols / turns);
    out.delta_meta = disk.delta_meta;
    for (int i = 0; i <= disk.nr; ++i)
        for (int j = 0; j < out.ncols; ++j) out.at(i, j) = disk.at(i, j);
    return out;
}

Field2D act(const SymmetryClass& cls, const GroupElement& g, const Field2D& field) {
    const Field2D* diskp = &field;
    Field2D extended;
    if (field.turns != 1) {
        extended = extend_to_disk(field);
        diskp = &extended;
    }
    const Field2D& f = *diskp;
    if (f.ncols % cls.group_order() != 0) throw std::invalid_argument("grid/group mismatch");
    const int cols_per_step = f.ncols / (2 * cls.n());  // columns spanned by pi/n

    const Mat2 mu_inv = element_matrix(cls, inverse(cls, mu_image(cls, g)));
    Field2D out = f;
    for (int i = 0; i <= f.nr; ++i) {
        for (int j = 0; j < f.ncols; ++j) {
            int jg;  // column of g . theta_j
            if (g.kind == GroupElement::Kind::rotation)
                jg = mod_index(j + g.index * cols_per_step, f.ncols);
            else
                jg = mod_index(g.index * cols_per_step - j, f.ncols);
            out.at(i, j) = mu_inv.apply(f.at(i, jg));
        }
    }
    return out;
}

double equivariance_residual(const SymmetryClass& cls, const Field2D& field) {
    const Field2D f = extend_to_disk(field);
    if (f.ncols % cls.group_order() != 0) throw std::invalid_argument("grid/group mismatch");
    const int cols_per_step = f.ncols / (2 * cls.n());

    const GroupElement gens[2] = {GroupElement::rotation(1), GroupElement::reflection(0)};
    double worst = 0.0;
    for (const auto& g : gens) {
        const Mat2 mu = mu_matrix(cls, g);
        for (int i = 0; i <= f.nr; ++i) {
            for (int j = 0; j < f.ncols; ++j) {
                int jg;
                if (g.kind == GroupElement::Kind::rotation)
                    jg = mod_index(j + g.index * cols_per_step, f.ncols);
                else
                    jg = mod_index(g.index * cols_per_step - j, f.ncols);
                const Vec2 diff = f.at(i, jg) - mu.apply(f.at(i, j));
                worst = std::max(worst, diff.norm());
            }
        }
    }
    return worst;
}

Field2D symmetrize(const SymmetryClass& cls, const Field2D& field) {
    const bool was_sector = field.turns != 1;
    const Field2D f = extend_to_disk(field);
    if (f.ncols % cls.group_order() != 0) throw std::invalid_argument("grid/group mismatch");
    const int cols_per_step = f.ncols / (2 * cls.n());
    const int m = 2 * cls.n();

    Field2D out = f;
    for (auto& v : out.data) v = Vec2{};
    const double inv_order = 1.0 / cls.group_order();

    for (int pass = 0; pass < 2; ++pass) {
        const auto kind = pass == 0 ? GroupElement::Kind::rotation : GroupElement::Kind::reflection;
        for (int k = 0; k < m; ++k) {
            const GroupElement g{kind, k};
            const Mat2 mu_inv = element_matrix(cls, inverse(cls, mu_image(cls, g)));
            for (int i = 0; i <= f.nr; ++i) {
                for (int j = 0; j < f.ncols; ++j) {
                    int jg;
                    if (kind == GroupElement::Kind::rotation)
                        jg = mod_index(j + k * cols_per_step, f.ncols);
                    else
                        jg = mod_index(k * cols_per_step - j, f.ncols);
                    out.at(i, j) += mu_inv.apply(f.at(i, jg)) * inv_order;
                }
            }
        }
    }
    // The rotation average of a single value under the twisted cyclic action
    // vanishes identically for n >= 2, so the projected origin is exactly 0.
    if (out.has_origin()) out.set_origin(Vec2{});
    if (was_sector) return restrict_to_sector(out, cls);
    return out;
}

void project_reflection(Field2D& sector) {
    if (!sector.cls) throw std::invalid_argument("project_reflection expects a sector field");
    const SymmetryClass cls = *sector.cls;
    // Constraint u(reflect x) = B u(x) for the in-sector reflection s_1
    // across theta = pi/(2n), with B = mu(s_1).
    const Mat2 B = mu_matrix(cls, GroupElement::reflection(1));
    const int N = sector.ncols;
    for (int i = 1; i <= sector.nr; ++i) {
        std::vector<Vec2> row(N);
        for (int j = 0; j < N; ++j)
            row[j] = (sector.at(i, j) + B.apply(sector.value(i, N - j))) * 0.5;
        for (int j = 0; j < N; ++j) sector.at(i, j) = row[j];
    }
    if (sector.has_origin()) sector.set_origin(Vec2{});
}

double reflection_residual(const Field2D& sector) {
    if (!sector.cls) throw std::invalid_argument("reflection_residual expects a sector field");
    const Mat2 B = mu_matrix(*sector.cls, GroupElement::reflection(1));
    double worst = 0.0;
    for (int i = 0; i <= sector.nr; ++i)
        for (int j = 0; j < sector.ncols; ++j)
            worst = std::max(worst,
                             (sector.value(i, sector.ncols - j) - B.apply(sector.at(i, j))).norm());
    return worst;
}

CircleTrace ring_trace(const Field2D& f, int i) {
    CircleTrace t;
    t.radius = f.node_r(i);
    const int m = f.ncols * f.turns;
    t.samples.resize(m);
    for (int j = 0; j < m; ++j) t.samples[j] = f.value(i, j);
    return t;
}

std::vector<Mat2> node_gradients(const Field2D& f) {
    f.check_shape(3, 2);
    const double dr = f.dr(), dth = f.dtheta();
    std::vector<Mat2> g(static_cast<size_t>(f.nr + 1) * f.ncols);
    for (int i = 0; i <= f.nr; ++i) {
        const double r = f.node_r(i);
        for (int j = 0; j < f.ncols; ++j) {
            if (i == 0 && f.has_origin()) continue;  // filled from ring 1 below
            Vec2 ur;
            if (i == 0)
                ur = (f.at(0, j) * -3.0 + f.at(1, j) * 4.0 - f.at(2, j)) * (1.0 / (2.0 * dr));
            else if (i == f.nr)
                ur = (f.at(i, j) * 3.0 - f.at(i - 1, j) * 4.0 + f.at(i - 2, j)) *
                     (1.0 / (2.0 * dr));
            else
                ur = (f.at(i + 1, j) - f.at(i - 1, j)) * (1.0 / (2.0 * dr));
            const Vec2 ut = (f.value(i, j + 1) - f.value(i, j - 1)) * (1.0 / (2.0 * dth * r));
            const double th = f.node_theta(j);
            const double co = std::cos(th), si = std::sin(th);
            const Vec2 ux = ur * co - ut * si;
            const Vec2 uy = ur * si + ut * co;
            g[static_cast<size_t>(i) * f.ncols + j] = Mat2{ux.x, uy.x, ux.y, uy.y};
        }
    }
    if (f.has_origin())
        for (int j = 0; j < f.ncols; ++j)
            g[j] = g[static_cast<size_t>(1) * f.ncols + j];
    return g;
}

FieldSampler::FieldSampler(const Field2D& f, bool with_gradients) : f_(f) {
    if (with_gradients) grads_ = node_gradients(f);
}

namespace {
struct BilinearStencil {
    int i0, j0;
    double t, s;
};

BilinearStencil locate(const Field2D& f, double r, double theta) {
    if (r > f.r_hi * (1.0 + 1e-12) || r < f.r_lo - 1e-12 * f.r_hi)
        throw std::invalid_argument("radius out of range");
    double fi = (r - f.r_lo) / f.dr();
    fi = std::min(std::max(fi, 0.0), static_cast<double>(f.nr));
    int i0 = std::min(static_cast<int>(fi), f.nr - 1);
    const double fj = theta / f.dtheta();
    const int j0 = static_cast<int>(std::floor(fj));
    return {i0, j0, fi - i0, fj - j0};
}
}  // namespace

Vec2 FieldSampler::value(double r, double theta) const {
    const auto st = locate(f_, r, theta);
    const Vec2 a = f_.value(st.i0, st.j0), b = f_.value(st.i0, st.j0 + 1);
    const Vec2 c = f_.value(st.i0 + 1, st.j0), d = f_.value(st.i0 + 1, st.j0 + 1);
    return (a * (1.0 - st.s) + b * st.s) * (1.0 - st.t) + (c * (1.0 - st.s) + d * st.s) * st.t;
}

Mat2 FieldSampler::gradient(double r, double theta) const {
    if (grads_.empty()) throw std::logic_error("sampler built without gradients");
    const auto st = locate(f_, r, theta);
    // Node matrices wrap like the field: G(theta + span) = R(twist) G R(-span)
    // for rotations; for our patches it is cheaper to fetch through value()
    // semantics by wrapping the column index explicitly.
    auto fetch = [&](int i, int j) {
        const int q = floor_div(j, f_.ncols);
        const int jj = j - q * f_.ncols;
        Mat2 g = grads_[static_cast<size_t>(i) * f_.ncols + jj];
        if (q == 0) return g;
        const Mat2 rot_val = Mat2::rotation(q * f_.twist);
        const Mat2 rot_dom = Mat2::rotation(-q * f_.span);
        return rot_val.compose(g).compose(rot_dom);
    };
    const Mat2 a = fetch(st.i0, st.j0), b = fetch(st.i0, st.j0 + 1);
    const Mat2 c = fetch(st.i0 + 1, st.j0), d = fetch(st.i0 + 1, st.j0 + 1);
    Mat2 out;
    out.a = (a.a * (1 - st.s) + b.a * st.s) * (1 - st.t) + (c.a * (1 - st.s) + d.a * st.s) * st.t;
    out.b = (a.b * (1 - st.s) + b.b * st.s) * (1 - st.t) + (c.b * (1 - st.s) + d.b * st.s) * st.t;
    out.c = (a.c * (1 - st.s) + b.c * st.s) * (1 - st.t) + (c.c * (1 - st.s) + d.c * st.s) * st.t;
    out.d = (a.d * (1 - st.s) + b.d * st.s) * (1 - st.t) + (c.d * (1 - st.s) + d.d * st.s) * st.t;
    return out;
}

CircleTrace FieldSampler::circle(double s, int m) const {
    CircleTrace t;
    t.radius = s;
    t.samples.resize(m);
    for (int k = 0; k < m; ++k) t.samples[k] = value(s, 2.0 * M_PI * k / m);
    return t;
}

std::string field_to_csv(const Field2D& f) {
    if (!f.cls) throw std::invalid_argument("field CSV requires a sector field with a class");
    std::ostringstream out;
    out << "# d=" << f.cls->d << " sign=" << to_string(f.cls->sign)
        << " delta=" << fmt_double(f.delta_meta) << " R=" << fmt_double(f.r_hi)
        << " Nr=" << f.nr << " Ntheta=" << f.ncols << "\n";
    out << "i,j,r,theta,u1,u2\n";
    const Vec2 o = f.origin();
    out << "0,0,0,0," << fmt_double(o.x) << "," << fmt_double(o.y) << "\n";
    for (int i = 1; i <= f.nr; ++i)
        for (int j = 0; j <= f.ncols; ++j) {
            const Vec2 v = f.value(i, j);
            out << i << "," << j << "," << fmt_double(f.node_r(i)) << ","
                << fmt_double(f.node_theta(j)) << "," << fmt_double(v.x) << ","
                << fmt_double(v.y) << "\n";
        }
    return out.str();
}

void write_field_csv(const Field2D& f, const std::string& path) {
    atomic_write(path, field_to_csv(f));
}

Field2D field_from_csv(const std::string& content) {
    std::istringstream in(content);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty field file");
    const auto hdr = parse_header(line);
    for (const char* key : {"d", "sign", "delta", "R", "Nr", "Ntheta"})
        if (!hdr.count(key)) throw std::runtime_error(std::string("field header missing ") + key);
    const SymmetryClass cls(std::stoi(hdr.at("d")), sign_from_string(hdr.at("sign")));
    Field2D f = Field2D::sector(cls, std::stod(hdr.at("R")), std::stoi(hdr.at("Nr")),
                                std::stoi(hdr.at("Ntheta")));
    f.delta_meta = std::stod(hdr.at("delta"));

    std::getline(in, line);  // column header
    std::vector<Vec2> glued(f.nr + 1);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto tok = split(line, ',');
        if (tok.size() != 6) throw std::runtime_error("malformed field row: " + line);
        const int i = std::stoi(tok[0]), j = std::stoi(tok[1]);
        const Vec2 v{std::strtod(tok[4].c_str(), nullptr), std::strtod(tok[5].c_str(), nullptr)};
        if (i < 0 || i > f.nr || j < 0 || j > f.ncols)
            throw std::runtime_error("field row out of range: " + line);
        if (j == f.ncols)
            glued[i] = v;
        else if (i == 0)
            f.set_origin(v);
        else
            f.at(i, j) = v;
    }

    double scale = 1.0;
    for (const auto& v : f.data) scale = std::max(scale, v.norm());
    if (f.origin().norm() > 1e-10 * scale)
        throw std::runtime_error("field file violates the origin invariant");
    const Mat2 A = Mat2::rotation(f.twist);
    for (int i = 1; i <= f.nr; ++i)
        if ((glued[i] - A.apply(f.at(i, 0))).norm() > 1e-10 * scale)
            throw std::runtime_error("field file violates the gluing invariant");
    if (reflection_residual(f) > 1e-8 * scale)
        throw std::runtime_error("field file violates the reflection invariant");
    return f;
}

Field2D read_field_csv(const std::string& path) { return field_from_csv(read_file(path)); }

}  // namespace agl
