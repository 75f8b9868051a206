#pragma once

#include <cmath>

namespace agl {

/// Planar vector with the handful of operations the solvers need.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2& operator+=(const Vec2& o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    Vec2& operator-=(const Vec2& o) {
        x -= o.x;
        y -= o.y;
        return *this;
    }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

/// 2x2 real matrix, row-major.
struct Mat2 {
    double a = 1.0, b = 0.0;  // [a b]
    double c = 0.0, d = 1.0;  // [c d]

    static Mat2 identity() { return {}; }
    static Mat2 rotation(double angle) {
        const double co = std::cos(angle), si = std::sin(angle);
        return {co, -si, si, co};
    }
    /// Reflection across the line through the origin at angle `axis`.
    static Mat2 reflection(double axis) {
        const double co = std::cos(2.0 * axis), si = std::sin(2.0 * axis);
        return {co, si, si, -co};
    }

    Mat2() = default;
    Mat2(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {}

    Vec2 apply(const Vec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    Mat2 compose(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 transpose() const { return {a, c, b, d}; }
    double det() const { return a * d - b * c; }
    double trace() const { return a + d; }
};

/// Unit radial / tangential frame at polar angle theta.
inline Vec2 unit_radial(double theta) { return {std::cos(theta), std::sin(theta)}; }
inline Vec2 unit_tangential(double theta) { return {-std::sin(theta), std::cos(theta)}; }

/// Complex-style product of planar vectors, identifying (x, y) with x + iy.
inline Vec2 complex_mul(const Vec2& p, const Vec2& q) {
    return {p.x * q.x - p.y * q.y, p.x * q.y + p.y * q.x};
}

inline Vec2 polar_unit(double phase) { return {std::cos(phase), std::sin(phase)}; }

}  // namespace agl
