#include "wrinkle/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "wrinkle/error.hpp"

namespace wrinkle {

const char* to_string(ShapeKind kind) {
    switch (kind) {
        case ShapeKind::disc: return "disc";
        case ShapeKind::ellipse: return "ellipse";
        case ShapeKind::half_disc: return "half_disc";
        case ShapeKind::rectangle: return "rectangle";
        case ShapeKind::convex_polygon: return "convex_polygon";
    }
    return "unknown";
}

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// 5-point Gauss-Legendre on [0, 1]
constexpr std::array<double, 5> gl_x{0.04691007703066800, 0.23076534494715845, 0.5,
                                     0.76923465505284155, 0.95308992296933200};
constexpr std::array<double, 5> gl_w{0.11846344252809454, 0.23931433524968324, 0.28444444444444444,
                                     0.23931433524968324, 0.11846344252809454};

constexpr int ellipse_table_size = 2048;

double ellipse_speed(double a, double b, double t) {
    return std::hypot(a * std::sin(t), b * std::cos(t));
}

double ellipse_arc_gl(double a, double b, double t0, double t1) {
    double s = 0.0;
    for (int k = 0; k < 5; ++k) s += gl_w[k] * ellipse_speed(a, b, t0 + gl_x[k] * (t1 - t0));
    return s * (t1 - t0);
}

double wrap_angle(double t, double base) {
    const double two_pi = 2.0 * pi;
    double r = std::fmod(t - base, two_pi);
    if (r < 0.0) r += two_pi;
    return base + r;
}

double ellipse_root(double r0, double z0, double z1, double g) {
    const double n0 = r0 * z0;
    double s0 = z1 - 1.0;
    double s1 = g < 0.0 ? 0.0 : std::hypot(n0, z1) - 1.0;
    double s = 0.0;
    for (int i = 0; i < 1100; ++i) {
        s = 0.5 * (s0 + s1);
        if (s == s0 || s == s1) break;
        const double ratio0 = n0 / (s + r0);
        const double ratio1 = z1 / (s + 1.0);
        g = ratio0 * ratio0 + ratio1 * ratio1 - 1.0;
        if (g > 0.0) s0 = s;
        else if (g < 0.0) s1 = s;
        else break;
    }
    return s;
}

// closest point on the ellipse (x/e0)^2 + (y/e1)^2 = 1, e0 >= e1, for y0, y1 >= 0
Vec2 ellipse_closest_quadrant(double e0, double e1, double y0, double y1) {
    if (y1 > 0.0) {
        if (y0 > 0.0) {
            const double z0 = y0 / e0, z1 = y1 / e1;
            const double g = z0 * z0 + z1 * z1 - 1.0;
            if (g != 0.0) {
                const double r0 = (e0 / e1) * (e0 / e1);
                const double sbar = ellipse_root(r0, z0, z1, g);
                return {r0 * y0 / (sbar + r0), y1 / (sbar + 1.0)};
            }
            return {y0, y1};
        }
        return {0.0, e1};
    }
    const double numer0 = e0 * y0, denom0 = e0 * e0 - e1 * e1;
    if (numer0 < denom0) {
        const double xde0 = numer0 / denom0;
        return {e0 * xde0, e1 * std::sqrt(std::max(0.0, 1.0 - xde0 * xde0))};
    }
    return {e0, 0.0};
}

Vec2 ellipse_closest_local(double a, double b, Vec2 y) {
    Vec2 q = ellipse_closest_quadrant(a, b, std::abs(y.x), std::abs(y.y));
    if (y.x < 0.0) q.x = -q.x;
    if (y.y < 0.0) q.y = -q.y;
    return q;
}

}  // namespace

// ---------------------------------------------------------------- pieces

Point2 BoundaryPiece::point(double t) const {
    switch (kind) {
        case PieceKind::segment: return p0 + ((t - t0) / length()) * (p1 - p0);
        case PieceKind::circle_arc: return center + radius * unit(t);
        case PieceKind::ellipse_arc: return center + Vec2{a * std::cos(t), b * std::sin(t)};
    }
    return {};
}

Vec2 BoundaryPiece::tangent(double t) const {
    switch (kind) {
        case PieceKind::segment: return normalized(p1 - p0);
        case PieceKind::circle_arc: return perp(unit(t));
        case PieceKind::ellipse_arc: return normalized(Vec2{-a * std::sin(t), b * std::cos(t)});
    }
    return {};
}

Vec2 BoundaryPiece::normal(double t) const {
    const Vec2 tau = tangent(t);
    return {tau.y, -tau.x};
}

double BoundaryPiece::curvature(double t) const {
    switch (kind) {
        case PieceKind::segment: return 0.0;
        case PieceKind::circle_arc: return 1.0 / radius;
        case PieceKind::ellipse_arc: {
            const double sp = ellipse_speed(a, b, t);
            return a * b / (sp * sp * sp);
        }
    }
    return 0.0;
}

double BoundaryPiece::speed(double t) const {
    switch (kind) {
        case PieceKind::segment: return 1.0;
        case PieceKind::circle_arc: return radius;
        case PieceKind::ellipse_arc: return ellipse_speed(a, b, t);
    }
    return 0.0;
}

double BoundaryPiece::length() const {
    switch (kind) {
        case PieceKind::segment: return norm(p1 - p0);
        case PieceKind::circle_arc: return radius * (t1 - t0);
        case PieceKind::ellipse_arc: return arc_table->back();
    }
    return 0.0;
}

double BoundaryPiece::arclength(double t) const {
    switch (kind) {
        case PieceKind::segment: return t - t0;
        case PieceKind::circle_arc: return radius * (t - t0);
        case PieceKind::ellipse_arc: {
            const double dt = (t1 - t0) / ellipse_table_size;
            int k = static_cast<int>(std::floor((t - t0) / dt));
            k = std::clamp(k, 0, ellipse_table_size - 1);
            const double tk = t0 + k * dt;
            return (*arc_table)[k] + ellipse_arc_gl(a, b, tk, t);
        }
    }
    return 0.0;
}

double BoundaryPiece::param_at_arclength(double s) const {
    switch (kind) {
        case PieceKind::segment: return t0 + s;
        case PieceKind::circle_arc: return t0 + s / radius;
        case PieceKind::ellipse_arc: {
            const auto& tab = *arc_table;
            const auto it = std::upper_bound(tab.begin(), tab.end(), s);
            int k = static_cast<int>(it - tab.begin()) - 1;
            k = std::clamp(k, 0, ellipse_table_size - 1);
            const double dt = (t1 - t0) / ellipse_table_size;
            double t = t0 + k * dt + (s - tab[k]) / ellipse_speed(a, b, t0 + k * dt);
            for (int i = 0; i < 6; ++i) t -= (arclength(t) - s) / ellipse_speed(a, b, t);
            return t;
        }
    }
    return t0;
}

std::pair<Point2, double> BoundaryPiece::closest(Point2 x) const {
    switch (kind) {
        case PieceKind::segment: {
            const Vec2 d = p1 - p0;
            const double len = norm(d);
            const double s = std::clamp(dot(x - p0, d) / len, 0.0, len);
            return {p0 + (s / len) * d, t0 + s};
        }
        case PieceKind::circle_arc: {
            const Vec2 v = x - center;
            const double r = norm(v);
            if (r > 0.0) {
                const double ang = wrap_angle(std::atan2(v.y, v.x), t0);
                if (ang <= t1) return {center + radius * unit(ang), ang};
            }
            const Point2 q0 = point(t0), q1 = point(t1);
            if (norm(x - q0) <= norm(x - q1)) return {q0, t0};
            return {q1, t1};
        }
        case PieceKind::ellipse_arc: {
            const Vec2 q = ellipse_closest_local(a, b, x - center);
            double t = std::atan2(q.y / b, q.x / a);
            t = wrap_angle(t, t0);
            return {center + q, t};
        }
    }
    return {p0, t0};
}

// ---------------------------------------------------------------- medial axis

Point2 MedialParabola::point(double u) const {
    const double v = (D * D - u * u) / (2.0 * D);
    return focus + u * eu + v * en;
}

std::vector<MedialSegment> MedialAxis::polyline(int per_arc) const {
    std::vector<MedialSegment> out = segments;
    for (const auto& p : parabolas) {
        for (int k = 0; k < per_arc; ++k) {
            const double ua = p.u0 + (p.u1 - p.u0) * k / per_arc;
            const double ub = p.u0 + (p.u1 - p.u0) * (k + 1) / per_arc;
            out.push_back({p.point(ua), p.point(ub)});
        }
    }
    return out;
}

std::vector<Point2> MedialAxis::sample(double spacing) const {
    std::vector<Point2> out = points;
    for (const auto& s : segments) {
        const double len = norm(s.b - s.a);
        const int n = std::max(1, static_cast<int>(std::floor(len / spacing)));
        for (int k = 0; k < n; ++k) out.push_back(s.a + ((k + 0.5) / n) * (s.b - s.a));
    }
    for (const auto& p : parabolas) {
        // approximate arclength through a fine polyline
        const int fine = 1024;
        std::vector<double> cum(fine + 1, 0.0);
        for (int k = 0; k < fine; ++k) {
            const double ua = p.u0 + (p.u1 - p.u0) * k / fine;
            const double ub = p.u0 + (p.u1 - p.u0) * (k + 1) / fine;
            cum[k + 1] = cum[k] + norm(p.point(ub) - p.point(ua));
        }
        const int n = std::max(1, static_cast<int>(std::floor(cum.back() / spacing)));
        for (int k = 0; k < n; ++k) {
            const double target = (k + 0.5) / n * cum.back();
            const auto it = std::upper_bound(cum.begin(), cum.end(), target);
            const int j = std::clamp(static_cast<int>(it - cum.begin()) - 1, 0, fine - 1);
            const double f = (target - cum[j]) / (cum[j + 1] - cum[j]);
            const double u = p.u0 + (p.u1 - p.u0) * (j + f) / fine;
            out.push_back(p.point(u));
        }
    }
    return out;
}

double MedialAxis::distance(Point2 x) const {
    double d = inf;
    for (const auto& p : points) d = std::min(d, norm(x - p));
    for (const auto& s : polyline(1024)) d = std::min(d, segment_distance(x, s.a, s.b));
    return d;
}

double MedialAxis::length() const {
    double len = 0.0;
    for (const auto& s : polyline(2048)) len += norm(s.b - s.a);
    return len;
}

// ---------------------------------------------------------------- polygon helpers

std::vector<Point2> clip_halfplane(const std::vector<Point2>& poly, Vec2 n, double c, double tol) {
    std::vector<Point2> out;
    const std::size_t m = poly.size();
    if (m == 0) return out;
    for (std::size_t i = 0; i < m; ++i) {
        const Point2 p = poly[i], q = poly[(i + 1) % m];
        const double fp = dot(n, p) - c, fq = dot(n, q) - c;
        const bool pin = fp <= tol, qin = fq <= tol;
        if (pin) out.push_back(p);
        if (pin != qin && std::abs(fp - fq) > 0.0) {
            const double s = fp / (fp - fq);
            if (s > 0.0 && s < 1.0) out.push_back(p + s * (q - p));
        }
    }
    // drop repeated vertices
    std::vector<Point2> clean;
    for (const auto& p : out) {
        if (clean.empty() || norm(p - clean.back()) > 1e-13 * (1.0 + norm(p))) clean.push_back(p);
    }
    while (clean.size() > 1 && norm(clean.front() - clean.back()) <= 1e-13 * (1.0 + norm(clean.front())))
        clean.pop_back();
    return clean;
}

double polygon_area(const std::vector<Point2>& poly) {
    double s = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) s += cross(poly[i], poly[(i + 1) % poly.size()]);
    return 0.5 * s;
}

bool point_in_convex_polygon(const std::vector<Point2>& poly, Point2 x, double tol) {
    const std::size_t m = poly.size();
    if (m < 3) return false;
    for (std::size_t i = 0; i < m; ++i) {
        const Point2 p = poly[i], q = poly[(i + 1) % m];
        const Vec2 e = q - p;
        const double len = norm(e);
        if (len == 0.0) continue;
        if (cross(e, x - p) / len < -tol) return false;
    }
    return true;
}

double segment_distance(Point2 x, Point2 a, Point2 b) {
    const Vec2 d = b - a;
    const double l2 = norm2(d);
    if (l2 == 0.0) return norm(x - a);
    const double s = std::clamp(dot(x - a, d) / l2, 0.0, 1.0);
    return norm(x - (a + s * d));
}

std::vector<std::vector<Point2>> side_cells(const Domain& domain) {
    if (!domain.is_polygonal()) fail(ErrorKind::not_implemented, "side cells need a polygonal domain");
    const auto& nu = domain.side_normals();
    const auto& c = domain.side_offsets();
    const auto poly = domain.polygon();
    const double tol = 1e-12 * domain.diameter();
    std::vector<std::vector<Point2>> cells;
    for (std::size_t i = 0; i < nu.size(); ++i) {
        std::vector<Point2> cell = poly;
        for (std::size_t j = 0; j < nu.size(); ++j) {
            if (j == i) continue;
            cell = clip_halfplane(cell, nu[j] - nu[i], c[j] - c[i], tol);
        }
        cells.push_back(std::move(cell));
    }
    return cells;
}

// ---------------------------------------------------------------- domain

Domain::Domain(Shape s) : shape_(std::move(s)) { build(); }

Domain Domain::disc(double radius, Point2 center) {
    if (!(radius > 0.0) || !std::isfinite(radius)) fail(ErrorKind::domain, "disc radius must be positive");
    return Domain(Disc{radius, center});
}

Domain Domain::ellipse(double a, double b, Point2 center) {
    if (!(b > 0.0) || !(a > b) || !std::isfinite(a))
        fail(ErrorKind::domain, "ellipse needs 0 < b < a");
    return Domain(Ellipse{a, b, center});
}

Domain Domain::half_disc(double radius, Point2 center, double orientation) {
    if (!(radius > 0.0) || !std::isfinite(radius)) fail(ErrorKind::domain, "half disc radius must be positive");
    if (!std::isfinite(orientation)) fail(ErrorKind::domain, "half disc orientation must be finite");
    return Domain(HalfDisc{radius, center, orientation});
}

Domain Domain::rectangle(double a, double b, Point2 center) {
    if (!(b > 0.0) || !(a >= b) || !std::isfinite(a))
        fail(ErrorKind::domain, "rectangle needs half-widths 0 < b <= a");
    return Domain(Rectangle{a, b, center});
}

Domain Domain::convex_polygon(std::vector<Point2> vertices) {
    const std::size_t n = vertices.size();
    if (n < 3) fail(ErrorKind::domain, "polygon needs at least 3 vertices");
    double scale = 0.0;
    for (const auto& v : vertices) {
        if (!std::isfinite(v.x) || !std::isfinite(v.y)) fail(ErrorKind::domain, "polygon vertex is not finite");
        for (const auto& w : vertices) scale = std::max(scale, norm(v - w));
    }
    if (scale == 0.0) fail(ErrorKind::domain, "polygon is degenerate");
    double turning = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 e0 = vertices[(i + 1) % n] - vertices[i];
        const Vec2 e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
        if (norm(e0) <= 1e-12 * scale) fail(ErrorKind::domain, "polygon has duplicate vertices");
        const double c = cross(e0, e1);
        if (c <= 1e-12 * scale * scale)
            fail(ErrorKind::domain, "polygon must be strictly convex and counter-clockwise");
        turning += std::atan2(c, dot(e0, e1));
    }
    if (std::abs(turning - 2.0 * pi) > 1e-6) fail(ErrorKind::domain, "polygon is not simple");
    return Domain(ConvexPolygon{std::move(vertices)});
}

ShapeKind Domain::kind() const {
    return static_cast<ShapeKind>(shape_.index());
}

std::string Domain::describe() const {
    std::ostringstream os;
    os.precision(12);
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Disc>) {
                os << "disc(radius=" << s.radius << ", center=(" << s.center.x << ", " << s.center.y << "))";
            } else if constexpr (std::is_same_v<T, Ellipse>) {
                os << "ellipse(a=" << s.a << ", b=" << s.b << ", center=(" << s.center.x << ", " << s.center.y
                   << "))";
            } else if constexpr (std::is_same_v<T, HalfDisc>) {
                os << "half_disc(radius=" << s.radius << ", center=(" << s.center.x << ", " << s.center.y
                   << "), orientation=" << s.orientation << ")";
            } else if constexpr (std::is_same_v<T, Rectangle>) {
                os << "rectangle(a=" << s.a << ", b=" << s.b << ", center=(" << s.center.x << ", " << s.center.y
                   << "))";
            } else {
                os << "convex_polygon(";
                for (std::size_t i = 0; i < s.vertices.size(); ++i)
                    os << (i ? ", " : "") << "(" << s.vertices[i].x << ", " << s.vertices[i].y << ")";
                os << ")";
            }
        },
        shape_);
    return os.str();
}

bool Domain::is_polygonal() const {
    return kind() == ShapeKind::rectangle || kind() == ShapeKind::convex_polygon;
}

std::vector<Point2> Domain::polygon() const {
    if (kind() == ShapeKind::convex_polygon) return std::get<ConvexPolygon>(shape_).vertices;
    if (kind() == ShapeKind::rectangle) {
        const auto& r = std::get<Rectangle>(shape_);
        return {r.center + Vec2{-r.a, -r.b}, r.center + Vec2{r.a, -r.b}, r.center + Vec2{r.a, r.b},
                r.center + Vec2{-r.a, r.b}};
    }
    fail(ErrorKind::not_implemented, "domain is not polygonal");
}

Point2 Domain::to_local(Point2 x) const { return rotated(x - origin_, -rotation_); }
Point2 Domain::to_global(Point2 x) const { return origin_ + rotated(x, rotation_); }
Vec2 Domain::vec_to_local(Vec2 v) const { return rotated(v, -rotation_); }
Vec2 Domain::vec_to_global(Vec2 v) const { return rotated(v, rotation_); }

void Domain::build() {
    pieces_.clear();
    normals_.clear();
    offsets_.clear();
    auto medial = std::make_shared<MedialAxis>();
    switch (kind()) {
        case ShapeKind::disc: {
            const auto& d = std::get<Disc>(shape_);
            origin_ = d.center;
            BoundaryPiece p;
            p.kind = PieceKind::circle_arc;
            p.center = d.center;
            p.radius = d.radius;
            p.t0 = 0.0;
            p.t1 = 2.0 * pi;
            pieces_.push_back(p);
            medial->points.push_back(d.center);
            medial->vertices.push_back({d.center, 0});
            break;
        }
        case ShapeKind::ellipse: {
            const auto& e = std::get<Ellipse>(shape_);
            origin_ = e.center;
            BoundaryPiece p;
            p.kind = PieceKind::ellipse_arc;
            p.center = e.center;
            p.a = e.a;
            p.b = e.b;
            p.t0 = 0.0;
            p.t1 = 2.0 * pi;
            auto tab = std::make_shared<std::vector<double>>(ellipse_table_size + 1, 0.0);
            const double dt = 2.0 * pi / ellipse_table_size;
            for (int k = 0; k < ellipse_table_size; ++k)
                (*tab)[k + 1] = (*tab)[k] + ellipse_arc_gl(e.a, e.b, k * dt, (k + 1) * dt);
            p.arc_table = tab;
            pieces_.push_back(p);
            const double c = e.a - e.b * e.b / e.a;
            const Point2 z0 = e.center + Vec2{-c, 0.0}, z1 = e.center + Vec2{c, 0.0};
            medial->segments.push_back({z0, z1});
            medial->vertices.push_back({z0, 1});
            medial->vertices.push_back({z1, 1});
            break;
        }
        case ShapeKind::half_disc: {
            const auto& h = std::get<HalfDisc>(shape_);
            origin_ = h.center;
            rotation_ = h.orientation - pi / 2;
            const double R = h.radius;
            BoundaryPiece flat;
            flat.kind = PieceKind::segment;
            flat.p0 = to_global({-R, 0.0});
            flat.p1 = to_global({R, 0.0});
            flat.t0 = 0.0;
            flat.t1 = 2.0 * R;
            BoundaryPiece arc;
            arc.kind = PieceKind::circle_arc;
            arc.center = h.center;
            arc.radius = R;
            arc.t0 = rotation_;
            arc.t1 = rotation_ + pi;
            pieces_.push_back(flat);
            pieces_.push_back(arc);
            MedialParabola par;
            par.focus = h.center;
            par.eu = vec_to_global({1.0, 0.0});
            par.en = vec_to_global({0.0, 1.0});
            par.D = R;
            par.u0 = -R;
            par.u1 = R;
            medial->parabolas.push_back(par);
            medial->vertices.push_back({flat.p0, 1});
            medial->vertices.push_back({flat.p1, 1});
            break;
        }
        case ShapeKind::rectangle:
        case ShapeKind::convex_polygon: {
            const auto poly = polygon();
            const std::size_t n = poly.size();
            for (std::size_t i = 0; i < n; ++i) {
                BoundaryPiece p;
                p.kind = PieceKind::segment;
                p.p0 = poly[i];
                p.p1 = poly[(i + 1) % n];
                p.t0 = 0.0;
                p.t1 = norm(p.p1 - p.p0);
                pieces_.push_back(p);
                const Vec2 tau = normalized(p.p1 - p.p0);
                const Vec2 nu{tau.y, -tau.x};
                normals_.push_back(nu);
                offsets_.push_back(dot(nu, p.p0));
            }
            if (kind() == ShapeKind::rectangle) origin_ = std::get<Rectangle>(shape_).center;
            break;
        }
    }
    if (is_polygonal()) {
        const double scale = diameter();
        const double tol = 1e-10 * scale;
        const auto cells = side_cells(*this);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const auto& cell = cells[i];
            for (std::size_t k = 0; k < cell.size(); ++k) {
                const Point2 p = cell[k], q = cell[(k + 1) % cell.size()];
                if (norm(q - p) <= tol) continue;
                const bool on_side = std::abs(offsets_[i] - dot(normals_[i], p)) <= tol &&
                                     std::abs(offsets_[i] - dot(normals_[i], q)) <= tol;
                if (on_side) continue;
                bool dup = false;
                for (const auto& s : medial->segments) {
                    if ((norm(s.a - p) <= 1e-9 * scale && norm(s.b - q) <= 1e-9 * scale) ||
                        (norm(s.a - q) <= 1e-9 * scale && norm(s.b - p) <= 1e-9 * scale)) {
                        dup = true;
                        break;
                    }
                }
                if (!dup) medial->segments.push_back({p, q});
            }
        }
        for (const auto& s : medial->segments) {
            for (const Point2 e : {s.a, s.b}) {
                bool found = false;
                for (auto& v : medial->vertices) {
                    if (norm(v.position - e) <= 1e-9 * scale) {
                        ++v.degree;
                        found = true;
                        break;
                    }
                }
                if (!found) medial->vertices.push_back({e, 1});
            }
        }
    }
    medial_ = medial;
}

Box Domain::bounding_box() const {
    switch (kind()) {
        case ShapeKind::disc: {
            const auto& d = std::get<Disc>(shape_);
            return {d.center - Vec2{d.radius, d.radius}, d.center + Vec2{d.radius, d.radius}};
        }
        case ShapeKind::ellipse: {
            const auto& e = std::get<Ellipse>(shape_);
            return {e.center - Vec2{e.a, e.b}, e.center + Vec2{e.a, e.b}};
        }
        case ShapeKind::half_disc: {
            const auto& h = std::get<HalfDisc>(shape_);
            std::vector<Point2> pts{pieces_[0].p0, pieces_[0].p1};
            const auto& arc = pieces_[1];
            for (int k = -4; k <= 8; ++k) {
                const double ang = k * pi / 2;
                if (ang >= arc.t0 && ang <= arc.t1) pts.push_back(h.center + h.radius * unit(ang));
            }
            pts.push_back(arc.point(arc.t0));
            pts.push_back(arc.point(arc.t1));
            Box b{pts[0], pts[0]};
            for (const auto& p : pts) {
                b.lo = {std::min(b.lo.x, p.x), std::min(b.lo.y, p.y)};
                b.hi = {std::max(b.hi.x, p.x), std::max(b.hi.y, p.y)};
            }
            return b;
        }
        default: {
            const auto poly = polygon();
            Box b{poly[0], poly[0]};
            for (const auto& p : poly) {
                b.lo = {std::min(b.lo.x, p.x), std::min(b.lo.y, p.y)};
                b.hi = {std::max(b.hi.x, p.x), std::max(b.hi.y, p.y)};
            }
            return b;
        }
    }
}

double Domain::area() const {
    switch (kind()) {
        case ShapeKind::disc: return pi * std::pow(std::get<Disc>(shape_).radius, 2);
        case ShapeKind::ellipse: return pi * std::get<Ellipse>(shape_).a * std::get<Ellipse>(shape_).b;
        case ShapeKind::half_disc: return 0.5 * pi * std::pow(std::get<HalfDisc>(shape_).radius, 2);
        default: return polygon_area(polygon());
    }
}

double Domain::perimeter() const {
    double p = 0.0;
    for (const auto& piece : pieces_) p += piece.length();
    return p;
}

double Domain::diameter() const {
    switch (kind()) {
        case ShapeKind::disc: return 2.0 * std::get<Disc>(shape_).radius;
        case ShapeKind::ellipse: return 2.0 * std::get<Ellipse>(shape_).a;
        case ShapeKind::half_disc: return 2.0 * std::get<HalfDisc>(shape_).radius;
        default: {
            double d = 0.0;
            const auto poly = polygon();
            for (const auto& p : poly)
                for (const auto& q : poly) d = std::max(d, norm(p - q));
            return d;
        }
    }
}

Point2 Domain::interior_point() const {
    switch (kind()) {
        case ShapeKind::half_disc: return to_global({0.0, 0.5 * std::get<HalfDisc>(shape_).radius});
        case ShapeKind::convex_polygon: {
            Point2 c{};
            const auto& v = std::get<ConvexPolygon>(shape_).vertices;
            for (const auto& p : v) c += p;
            return c / static_cast<double>(v.size());
        }
        default: return origin_;
    }
}

bool Domain::contains(Point2 x, double tol) const {
    switch (kind()) {
        case ShapeKind::disc: {
            const auto& d = std::get<Disc>(shape_);
            return norm(x - d.center) <= d.radius + tol;
        }
        case ShapeKind::ellipse: {
            const auto& e = std::get<Ellipse>(shape_);
            const Vec2 y = x - e.center;
            const double f = (y.x / e.a) * (y.x / e.a) + (y.y / e.b) * (y.y / e.b);
            if (f <= 1.0) return true;
            if (tol <= 0.0) return false;
            return norm(y - ellipse_closest_local(e.a, e.b, y)) <= tol;
        }
        case ShapeKind::half_disc: {
            const auto& h = std::get<HalfDisc>(shape_);
            const Point2 l = to_local(x);
            return l.y >= -tol && norm(l) <= h.radius + tol;
        }
        default: {
            for (std::size_t i = 0; i < normals_.size(); ++i)
                if (dot(normals_[i], x) - offsets_[i] > tol) return false;
            return true;
        }
    }
}

double Domain::boundary_distance(Point2 x) const {
    const double scale = diameter();
    if (!std::isfinite(x.x) || !std::isfinite(x.y) || !contains(x, 1e-10 * scale))
        fail(ErrorKind::domain, "point lies outside the domain");
    switch (kind()) {
        case ShapeKind::disc: {
            const auto& d = std::get<Disc>(shape_);
            return std::max(0.0, d.radius - norm(x - d.center));
        }
        case ShapeKind::half_disc: {
            const auto& h = std::get<HalfDisc>(shape_);
            const Point2 l = to_local(x);
            return std::max(0.0, std::min(l.y, h.radius - norm(l)));
        }
        case ShapeKind::ellipse: {
            if (!contains(x)) return 0.0;
            const auto& p = pieces_[0];
            return norm(x - p.closest(x).first);
        }
        default: {
            double d = inf;
            for (std::size_t i = 0; i < normals_.size(); ++i) d = std::min(d, offsets_[i] - dot(normals_[i], x));
            return std::max(0.0, d);
        }
    }
}

std::vector<NearestPoint> Domain::nearest_boundary_points(Point2 x, double tol) const {
    const double scale = diameter();
    if (!std::isfinite(x.x) || !std::isfinite(x.y) || !contains(x, 1e-10 * scale))
        fail(ErrorKind::domain, "point lies outside the domain");
    std::vector<NearestPoint> cand;
    if (kind() == ShapeKind::disc) {
        const auto& d = std::get<Disc>(shape_);
        const Vec2 v = x - d.center;
        if (norm(v) <= 1e-14 * d.radius) {
            // every boundary point is nearest; report two antipodal representatives
            cand.push_back({d.center + Vec2{d.radius, 0.0}, 0, 0.0, d.radius});
            cand.push_back({d.center + Vec2{-d.radius, 0.0}, 0, pi, d.radius});
            return cand;
        }
    }
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const auto [q, t] = pieces_[i].closest(x);
        cand.push_back({q, i, t, norm(x - q)});
        if (pieces_[i].kind == PieceKind::ellipse_arc) {
            const auto& pc = pieces_[i];
            const Vec2 lq = q - pc.center;
            for (const Vec2 m : {Vec2{lq.x, -lq.y}, Vec2{-lq.x, lq.y}}) {
                const Point2 mq = pc.center + m;
                double mt = std::atan2(m.y / pc.b, m.x / pc.a);
                mt = wrap_angle(mt, pc.t0);
                cand.push_back({mq, i, mt, norm(x - mq)});
            }
        }
    }
    double dmin = inf;
    for (const auto& c : cand) dmin = std::min(dmin, c.distance);
    std::vector<NearestPoint> out;
    for (const auto& c : cand) {
        if (c.distance > dmin + tol) continue;
        bool dup = false;
        for (const auto& o : out) {
            if (norm(o.point - c.point) <= 1e-9 * scale) {
                dup = true;
                break;
            }
        }
        if (!dup) out.push_back(c);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const NearestPoint& a, const NearestPoint& b) { return a.distance < b.distance; });
    return out;
}

NearestPoint Domain::nearest_boundary_point(Point2 x) const {
    return nearest_boundary_points(x, 0.0).front();
}

Vec2 Domain::quickest_exit_gradient(Point2 x) const {
    const double scale = diameter();
    const auto pts = nearest_boundary_points(x, 1e-9 * scale);
    if (pts.size() != 1) fail(ErrorKind::ambiguity, "nearest boundary point is not unique");
    const auto& p = pts.front();
    if (p.distance <= 1e-12 * scale) {
        for (const auto& c : corners())
            if (norm(c - p.point) <= 1e-12 * scale) fail(ErrorKind::ambiguity, "gradient undefined at a corner");
        return -pieces_[p.piece].normal(p.param);
    }
    return (x - p.point) / p.distance;
}

std::vector<Point2> Domain::corners() const {
    if (kind() == ShapeKind::half_disc) return {pieces_[0].p0, pieces_[0].p1};
    if (is_polygonal()) return polygon();
    return {};
}

std::vector<BoundaryPoint> Domain::boundary_sample(int n) const {
    if (n < 1) fail(ErrorKind::parameter, "boundary sample count must be positive");
    std::vector<BoundaryPoint> out;
    auto smooth_point = [&](std::size_t i, double t, double arc) {
        const auto& p = pieces_[i];
        BoundaryPoint b;
        b.position = p.point(t);
        b.nu = p.normal(t);
        b.tau = p.tangent(t);
        b.arclength = arc;
        b.piece = i;
        b.param = t;
        return b;
    };
    if (kind() == ShapeKind::disc || kind() == ShapeKind::ellipse) {
        const auto& p = pieces_[0];
        const double len = p.length();
        for (int k = 0; k < n; ++k) {
            const double s = len * k / n;
            out.push_back(smooth_point(0, p.param_at_arclength(s), s));
        }
        return out;
    }
    const std::size_t m = pieces_.size();
    if (static_cast<std::size_t>(n) < m) fail(ErrorKind::parameter, "boundary sample count below the corner count");
    const double total = perimeter();
    const std::size_t rest = n - m;
    std::vector<std::size_t> count(m, 0);
    std::vector<std::pair<double, std::size_t>> frac;
    std::size_t used = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double want = rest * pieces_[i].length() / total;
        count[i] = static_cast<std::size_t>(std::floor(want));
        used += count[i];
        frac.push_back({want - count[i], i});
    }
    std::stable_sort(frac.begin(), frac.end(), [](auto a, auto b) { return a.first > b.first; });
    for (std::size_t k = 0; used < rest; ++k, ++used) ++count[frac[k % m].second];
    double arc0 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& p = pieces_[i];
        BoundaryPoint c;
        c.position = p.point(p.t0);
        c.corner = true;
        c.arclength = arc0;
        c.piece = i;
        c.param = p.t0;
        out.push_back(c);
        const double len = p.length();
        for (std::size_t j = 1; j <= count[i]; ++j) {
            const double s = len * j / (count[i] + 1);
            out.push_back(smooth_point(i, p.param_at_arclength(s), arc0 + s));
        }
        arc0 += len;
    }
    return out;
}

double Domain::exit_length(std::size_t piece, double t) const {
    if (piece >= pieces_.size()) fail(ErrorKind::parameter, "boundary piece index out of range");
    switch (kind()) {
        case ShapeKind::disc: return std::get<Disc>(shape_).radius;
        case ShapeKind::ellipse: {
            const auto& e = std::get<Ellipse>(shape_);
            return (e.b / e.a) * std::hypot(e.b * std::cos(t), e.a * std::sin(t));
        }
        case ShapeKind::half_disc: {
            const double R = std::get<HalfDisc>(shape_).radius;
            if (piece == 0) {
                const double u = t - R;
                return (R * R - u * u) / (2.0 * R);
            }
            const double s = std::sin(t - rotation_);
            return R * s / (1.0 + s);
        }
        default: {
            const Point2 y = pieces_[piece].point(t);
            const Vec2 nu = normals_[piece];
            double L = inf;
            for (std::size_t j = 0; j < normals_.size(); ++j) {
                if (j == piece) continue;
                const double denom = 1.0 - dot(nu, normals_[j]);
                if (denom <= 0.0) continue;
                L = std::min(L, (offsets_[j] - dot(normals_[j], y)) / denom);
            }
            return std::max(0.0, L);
        }
    }
}

bool Domain::operator==(const Domain& o) const {
    if (kind() != o.kind()) return false;
    switch (kind()) {
        case ShapeKind::disc: {
            const auto &a = std::get<Disc>(shape_), &b = std::get<Disc>(o.shape_);
            return a.radius == b.radius && a.center == b.center;
        }
        case ShapeKind::ellipse: {
            const auto &a = std::get<Ellipse>(shape_), &b = std::get<Ellipse>(o.shape_);
            return a.a == b.a && a.b == b.b && a.center == b.center;
        }
        case ShapeKind::half_disc: {
            const auto &a = std::get<HalfDisc>(shape_), &b = std::get<HalfDisc>(o.shape_);
            return a.radius == b.radius && a.center == b.center && a.orientation == b.orientation;
        }
        case ShapeKind::rectangle: {
            const auto &a = std::get<Rectangle>(shape_), &b = std::get<Rectangle>(o.shape_);
            return a.a == b.a && a.b == b.b && a.center == b.center;
        }
        case ShapeKind::convex_polygon: {
            const auto &a = std::get<ConvexPolygon>(shape_), &b = std::get<ConvexPolygon>(o.shape_);
            if (a.vertices.size() != b.vertices.size()) return false;
            for (std::size_t i = 0; i < a.vertices.size(); ++i)
                if (!(a.vertices[i] == b.vertices[i])) return false;
            return true;
        }
    }
    return false;
}

}  // namespace wrinkle
