#pragma once

#include <string>
#include <vector>

#include "wrinkle/vec.hpp"

namespace wrinkle {

struct FieldValue {
    Vec2 u{};
    double w = 0.0;
};

// Displacements defined on the whole plane (or at least a neighbourhood of
// the domain), sampled point by point.
class FieldSource {
public:
    virtual ~FieldSource() = default;
    virtual FieldValue at(Point2 x) const = 0;
    // finest length scale the field carries, 0 if none
    virtual double finest_scale() const { return 0.0; }
};

// 2x2 displacement gradient, row i = gradient of u_i
struct Grad2 {
    Vec2 r0{}, r1{};
    Sym2 sym() const { return {r0.x, 0.5 * (r0.y + r1.x), r1.y}; }
    double frobenius() const { return std::sqrt(norm2(r0) + norm2(r1)); }
};

// Node samples of u and w on a square lattice, node (i, j) at origin + (i, j) h.
class DisplacementField final : public FieldSource {
public:
    DisplacementField(Point2 origin, double h, int nx, int ny);
    static DisplacementField sample(const FieldSource& src, Box box, double h);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double h() const { return h_; }
    Point2 origin() const { return origin_; }
    Point2 node(int i, int j) const { return origin_ + h_ * Vec2{double(i), double(j)}; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }

    Vec2 u(int i, int j) const { return u_[index(i, j)]; }
    double w(int i, int j) const { return w_[index(i, j)]; }
    void set(int i, int j, FieldValue v) {
        u_[index(i, j)] = v.u;
        w_[index(i, j)] = v.w;
    }

    // centred second-order differences, one-sided on the lattice edge
    Grad2 grad_u(int i, int j) const;
    Vec2 grad_w(int i, int j) const;
    Sym2 hess_w(int i, int j) const;

    // bilinear interpolation, clamped to the lattice
    FieldValue at(Point2 x) const override;
    double finest_scale() const override { return 0.0; }

    // x,y,u1,u2,w rows, x fastest
    void write_csv(const std::string& path) const;
    static DisplacementField read_csv(const std::string& path);

private:
    double d1(const std::vector<double>& f, int i, int j, int axis) const;
    Point2 origin_;
    double h_;
    int nx_, ny_;
    std::vector<Vec2> u_;
    std::vector<double> w_;
};

// centred-difference derivatives of a source at a point
Grad2 source_grad_u(const FieldSource& src, Point2 x, double h);
Vec2 source_grad_w(const FieldSource& src, Point2 x, double h);
Sym2 source_hess_w(const FieldSource& src, Point2 x, double h);

}  // namespace wrinkle
