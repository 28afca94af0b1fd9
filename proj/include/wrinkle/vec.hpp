#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wrinkle {

inline constexpr double pi = std::numbers::pi;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
};

using Point2 = Vec2;

constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
constexpr bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
constexpr double norm2(Vec2 a) { return a.x * a.x + a.y * a.y; }
inline Vec2 normalized(Vec2 a) { return a / norm(a); }
// counter-clockwise quarter turn
constexpr Vec2 perp(Vec2 a) { return {-a.y, a.x}; }
inline Vec2 rotated(Vec2 a, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * a.x - s * a.y, s * a.x + c * a.y};
}
inline Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

// symmetric 2x2 matrix
struct Sym2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    constexpr Sym2& operator+=(const Sym2& o) { xx += o.xx; xy += o.xy; yy += o.yy; return *this; }
    constexpr Sym2& operator-=(const Sym2& o) { xx -= o.xx; xy -= o.xy; yy -= o.yy; return *this; }
    constexpr Sym2& operator*=(double s) { xx *= s; xy *= s; yy *= s; return *this; }
};

constexpr Sym2 operator+(Sym2 a, const Sym2& b) { return a += b; }
constexpr Sym2 operator-(Sym2 a, const Sym2& b) { return a -= b; }
constexpr Sym2 operator*(double s, Sym2 a) { return a *= s; }
constexpr Sym2 operator*(Sym2 a, double s) { return a *= s; }

constexpr Sym2 outer(Vec2 a) { return {a.x * a.x, a.x * a.y, a.y * a.y}; }
constexpr Sym2 sym_outer(Vec2 a, Vec2 b) { return {a.x * b.x, 0.5 * (a.x * b.y + a.y * b.x), a.y * b.y}; }
constexpr Sym2 identity2() { return {1.0, 0.0, 1.0}; }
constexpr double trace(const Sym2& m) { return m.xx + m.yy; }
constexpr double det(const Sym2& m) { return m.xx * m.yy - m.xy * m.xy; }
// Frobenius inner product
constexpr double ddot(const Sym2& a, const Sym2& b) { return a.xx * b.xx + 2.0 * a.xy * b.xy + a.yy * b.yy; }
inline double frobenius(const Sym2& m) { return std::sqrt(ddot(m, m)); }
constexpr Vec2 apply(const Sym2& m, Vec2 v) { return {m.xx * v.x + m.xy * v.y, m.xy * v.x + m.yy * v.y}; }
constexpr double quad(const Sym2& m, Vec2 v) { return dot(v, apply(m, v)); }
// cofactor matrix, i.e. the perp-perp Hessian when m is a Hessian
constexpr Sym2 cofactor(const Sym2& m) { return {m.yy, -m.xy, m.xx}; }

struct Eigen2 {
    double lambda1 = 0.0;  // smaller
    double lambda2 = 0.0;
    Vec2 eta1{1.0, 0.0};
    Vec2 eta2{0.0, 1.0};
};

// Ties (relative gap below tie_tol) resolve to the coordinate axes.
inline Eigen2 eigen(const Sym2& m, double tie_tol = 1e-12) {
    Eigen2 e;
    const double mean = 0.5 * (m.xx + m.yy);
    const double half = 0.5 * (m.xx - m.yy);
    const double r = std::hypot(half, m.xy);
    e.lambda1 = mean - r;
    e.lambda2 = mean + r;
    const double scale = std::max({std::abs(m.xx), std::abs(m.yy), std::abs(m.xy), 1e-300});
    if (r <= tie_tol * scale) {
        e.eta1 = {1.0, 0.0};
        e.eta2 = {0.0, 1.0};
        return e;
    }
    // eigenvector for lambda2 via the half-angle
    const double ang = 0.5 * std::atan2(m.xy, half);
    e.eta2 = unit(ang);
    e.eta1 = perp(e.eta2);
    if (e.eta1.x < 0.0 || (e.eta1.x == 0.0 && e.eta1.y < 0.0)) e.eta1 = -e.eta1;
    e.eta2 = {-e.eta1.y, e.eta1.x};
    if (e.eta2.y < 0.0 || (e.eta2.y == 0.0 && e.eta2.x < 0.0)) e.eta2 = -e.eta2;
    return e;
}

struct Box {
    Point2 lo;
    Point2 hi;
    double width() const { return hi.x - lo.x; }
    double height() const { return hi.y - lo.y; }
    Point2 center() const { return 0.5 * (lo + hi); }
};

}  // namespace wrinkle
