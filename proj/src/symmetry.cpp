#include "agl/symmetry.hpp"

#include <cmath>
#include <string>

namespace agl {

Sign sign_from_string(const std::string& s) {
    if (s == "plus" || s == "+") return Sign::plus;
    if (s == "minus" || s == "-") return Sign::minus;
    throw std::invalid_argument("unknown sign '" + s + "' (expected plus or minus)");
}

int mod_index(int k, int m) {
    int r = k % m;
    return r < 0 ? r + m : r;
}

GroupElement compose(const SymmetryClass& cls, const GroupElement& g, const GroupElement& h) {
    const int m = cls.rotation_count();
    using K = GroupElement::Kind;
    // r^i r^j = r^{i+j},  r^i s_j = s_{i+j},  s_i r^j = s_{i-j},  s_i s_j = r^{i-j}
    if (g.kind == K::rotation && h.kind == K::rotation)
        return GroupElement::rotation(mod_index(g.index + h.index, m));
    if (g.kind == K::rotation && h.kind == K::reflection)
        return GroupElement::reflection(mod_index(g.index + h.index, m));
    if (g.kind == K::reflection && h.kind == K::rotation)
        return GroupElement::reflection(mod_index(g.index - h.index, m));
    return GroupElement::rotation(mod_index(g.index - h.index, m));
}

GroupElement inverse(const SymmetryClass& cls, const GroupElement& g) {
    const int m = cls.rotation_count();
    if (g.kind == GroupElement::Kind::rotation)
        return GroupElement::rotation(mod_index(-g.index, m));
    return g;  // reflections are involutions
}

Mat2 element_matrix(const SymmetryClass& cls, const GroupElement& g) {
    const double step = M_PI / cls.n();
    if (g.kind == GroupElement::Kind::rotation) return Mat2::rotation(g.index * step);
    // s_k = r^k s_0 reflects across the line at angle k*pi/(2n).
    return Mat2::reflection(g.index * step / 2.0);
}

GroupElement mu_image(const SymmetryClass& cls, const GroupElement& g) {
    const int m = cls.rotation_count();
    const int dk = mod_index(cls.d * g.index, m);
    if (g.kind == GroupElement::Kind::rotation) return GroupElement::rotation(dk);
    if (cls.sign == Sign::plus) return GroupElement::reflection(dk);
    // minus: sigma s_{dk} = r^n s_{dk} = s_{dk + n}
    return GroupElement::reflection(mod_index(dk + cls.n(), m));
}

Mat2 mu_matrix(const SymmetryClass& cls, const GroupElement& g) {
    return element_matrix(cls, mu_image(cls, g));
}

double act_on_angle(const SymmetryClass& cls, const GroupElement& g, double theta) {
    const double step = M_PI / cls.n();
    if (g.kind == GroupElement::Kind::rotation) return theta + g.index * step;
    return g.index * step - theta;  // reflection across the line at angle k*step/2
}

int winding_number(const CircleTrace& trace, double min_modulus) {
    const auto& s = trace.samples;
    const int m = static_cast<int>(s.size());
    if (m < 8) throw std::invalid_argument("undersampled trace");
    for (const auto& v : s)
        if (v.norm() < min_modulus)
            throw std::runtime_error("degree undefined on this circle");
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
        const Vec2& a = s[i];
        const Vec2& b = s[(i + 1) % m];
        const double step = std::atan2(a.cross(b), a.dot(b));
        if (std::abs(step) > M_PI / 2.0) throw std::runtime_error("undersampled trace");
        total += step;
    }
    return static_cast<int>(std::lround(total / (2.0 * M_PI)));
}

bool degree_in_class(int d, int w) {
    const int period = 2 * (1 - d);
    return mod_index(w - d, period) == 0;
}

}  // namespace agl
