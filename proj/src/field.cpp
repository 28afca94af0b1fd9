#include "wrinkle/field.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "wrinkle/error.hpp"
#include "wrinkle/parallel.hpp"

namespace wrinkle {

DisplacementField::DisplacementField(Point2 origin, double h, int nx, int ny)
    : origin_(origin), h_(h), nx_(nx), ny_(ny) {
    if (!(h > 0.0) || nx < 3 || ny < 3) fail(ErrorKind::resolution, "displacement lattice needs h > 0 and 3 x 3 nodes");
    u_.assign(static_cast<std::size_t>(nx) * ny, Vec2{});
    w_.assign(u_.size(), 0.0);
}

DisplacementField DisplacementField::sample(const FieldSource& src, Box box, double h) {
    const int nx = static_cast<int>(std::ceil(box.width() / h - 1e-9)) + 1;
    const int ny = static_cast<int>(std::ceil(box.height() / h - 1e-9)) + 1;
    DisplacementField f(box.lo, h, nx, ny);
    parallel_for(ny, [&](std::size_t j) {
        for (int i = 0; i < nx; ++i) f.set(i, static_cast<int>(j), src.at(f.node(i, static_cast<int>(j))));
    });
    return f;
}

namespace {

double diff1(double fm, double f0, double fp, int i, int n, double fpp_or_fmm, double h) {
    if (i == 0) return (-3.0 * f0 + 4.0 * fp - fpp_or_fmm) / (2.0 * h);
    if (i == n - 1) return (3.0 * f0 - 4.0 * fm + fpp_or_fmm) / (2.0 * h);
    return (fp - fm) / (2.0 * h);
}

}  // namespace

double DisplacementField::d1(const std::vector<double>& f, int i, int j, int axis) const {
    const int n = axis == 0 ? nx_ : ny_;
    const int k = axis == 0 ? i : j;
    auto at = [&](int kk) { return axis == 0 ? f[index(kk, j)] : f[index(i, kk)]; };
    const double f0 = at(k);
    const double fm = k > 0 ? at(k - 1) : 0.0;
    const double fp = k < n - 1 ? at(k + 1) : 0.0;
    const double far = k == 0 ? at(2) : (k == n - 1 ? at(n - 3) : 0.0);
    return diff1(fm, f0, fp, k, n, far, h_);
}

Grad2 DisplacementField::grad_u(int i, int j) const {
    auto comp = [&](int c, int axis) {
        const int n = axis == 0 ? nx_ : ny_;
        const int k = axis == 0 ? i : j;
        auto at = [&](int kk) {
            const Vec2 v = axis == 0 ? u_[index(kk, j)] : u_[index(i, kk)];
            return c == 0 ? v.x : v.y;
        };
        const double f0 = at(k);
        const double fm = k > 0 ? at(k - 1) : 0.0;
        const double fp = k < n - 1 ? at(k + 1) : 0.0;
        const double far = k == 0 ? at(2) : (k == n - 1 ? at(n - 3) : 0.0);
        return diff1(fm, f0, fp, k, n, far, h_);
    };
    return {{comp(0, 0), comp(0, 1)}, {comp(1, 0), comp(1, 1)}};
}

Vec2 DisplacementField::grad_w(int i, int j) const { return {d1(w_, i, j, 0), d1(w_, i, j, 1)}; }

Sym2 DisplacementField::hess_w(int i, int j) const {
    const int ic = std::clamp(i, 1, nx_ - 2), jc = std::clamp(j, 1, ny_ - 2);
    auto W = [&](int a, int b) { return w_[index(a, b)]; };
    const double h2 = h_ * h_;
    Sym2 hs;
    hs.xx = (W(ic + 1, j) - 2.0 * W(ic, j) + W(ic - 1, j)) / h2;
    hs.yy = (W(i, jc + 1) - 2.0 * W(i, jc) + W(i, jc - 1)) / h2;
    hs.xy = (W(ic + 1, jc + 1) - W(ic + 1, jc - 1) - W(ic - 1, jc + 1) + W(ic - 1, jc - 1)) / (4.0 * h2);
    return hs;
}

FieldValue DisplacementField::at(Point2 x) const {
    const double gx = std::clamp((x.x - origin_.x) / h_, 0.0, double(nx_ - 1));
    const double gy = std::clamp((x.y - origin_.y) / h_, 0.0, double(ny_ - 1));
    const int i = std::min(static_cast<int>(gx), nx_ - 2), j = std::min(static_cast<int>(gy), ny_ - 2);
    const double a = gx - i, b = gy - j;
    FieldValue v;
    const double w00 = (1 - a) * (1 - b), w10 = a * (1 - b), w01 = (1 - a) * b, w11 = a * b;
    v.u = w00 * u(i, j) + w10 * u(i + 1, j) + w01 * u(i, j + 1) + w11 * u(i + 1, j + 1);
    v.w = w00 * w(i, j) + w10 * w(i + 1, j) + w01 * w(i, j + 1) + w11 * w(i + 1, j + 1);
    return v;
}

void DisplacementField::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::config, "cannot write " + path);
    out << "x,y,u1,u2,w\n";
    char buf[160];
    for (int j = 0; j < ny_; ++j)
        for (int i = 0; i < nx_; ++i) {
            const Point2 p = node(i, j);
            const Vec2 uu = u(i, j);
            std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g,%.9g\n", p.x, p.y, uu.x, uu.y, w(i, j));
            out << buf;
        }
}

DisplacementField DisplacementField::read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::config, "cannot read " + path);
    std::string line;
    std::getline(in, line);
    if (line.rfind("x,y,u1,u2,w", 0) != 0) fail(ErrorKind::data, path + ": expected header x,y,u1,u2,w");
    std::vector<std::array<double, 5>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::array<double, 5> r{};
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &r[0], &r[1], &r[2], &r[3], &r[4]) != 5)
            fail(ErrorKind::data, path + ": malformed row '" + line + "'");
        rows.push_back(r);
    }
    if (rows.size() < 9) fail(ErrorKind::data, path + ": too few nodes");
    // row-major with x fastest: the first change of y fixes nx
    std::size_t nx = 1;
    while (nx < rows.size() && rows[nx][1] == rows[0][1]) ++nx;
    if (nx < 2 || rows.size() % nx != 0) fail(ErrorKind::data, path + ": not a regular lattice");
    const std::size_t ny = rows.size() / nx;
    const double h = rows[1][0] - rows[0][0];
    DisplacementField f({rows[0][0], rows[0][1]}, h, static_cast<int>(nx), static_cast<int>(ny));
    const double tol = 1e-6 * h;
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) {
            const auto& r = rows[j * nx + i];
            const Point2 x = f.node(static_cast<int>(i), static_cast<int>(j));
            if (std::abs(r[0] - x.x) > tol || std::abs(r[1] - x.y) > tol)
                fail(ErrorKind::data, path + ": nodes are not on a square lattice");
            f.set(static_cast<int>(i), static_cast<int>(j), {{r[2], r[3]}, r[4]});
        }
    return f;
}

Grad2 source_grad_u(const FieldSource& src, Point2 x, double h) {
    const Vec2 ex{h, 0.0}, ey{0.0, h};
    const Vec2 dx = (src.at(x + ex).u - src.at(x - ex).u) / (2.0 * h);
    const Vec2 dy = (src.at(x + ey).u - src.at(x - ey).u) / (2.0 * h);
    return {{dx.x, dy.x}, {dx.y, dy.y}};
}

Vec2 source_grad_w(const FieldSource& src, Point2 x, double h) {
    const Vec2 ex{h, 0.0}, ey{0.0, h};
    return {(src.at(x + ex).w - src.at(x - ex).w) / (2.0 * h), (src.at(x + ey).w - src.at(x - ey).w) / (2.0 * h)};
}

Sym2 source_hess_w(const FieldSource& src, Point2 x, double h) {
    const Vec2 ex{h, 0.0}, ey{0.0, h};
    const double f0 = src.at(x).w, h2 = h * h;
    Sym2 hs;
    hs.xx = (src.at(x + ex).w - 2.0 * f0 + src.at(x - ex).w) / h2;
    hs.yy = (src.at(x + ey).w - 2.0 * f0 + src.at(x - ey).w) / h2;
    hs.xy = (src.at(x + ex + ey).w - src.at(x + ex - ey).w - src.at(x - ex + ey).w + src.at(x - ex - ey).w) / (4.0 * h2);
    return hs;
}

}  // namespace wrinkle
