#include "wrinkle/stablelines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "wrinkle/error.hpp"

namespace wrinkle {

const char* to_string(RegionLabel l) {
    switch (l) {
        case RegionLabel::outside: return "outside";
        case RegionLabel::sigma: return "sigma";
        case RegionLabel::flattened: return "flattened";
        case RegionLabel::ordered: return "ordered";
        case RegionLabel::unconstrained: return "unconstrained";
    }
    return "unknown";
}

const char* to_string(EndKind k) {
    switch (k) {
        case EndKind::boundary: return "boundary";
        case EndKind::medial_axis: return "medial_axis";
        case EndKind::focal_point: return "focal_point";
        case EndKind::corner: return "corner";
        case EndKind::interface: return "interface";
    }
    return "unknown";
}

const char* to_string(RhoKind k) {
    switch (k) {
        case RhoKind::constant: return "constant";
        case RhoKind::proportional_to_r: return "proportional_to_r";
        case RhoKind::general: return "general";
    }
    return "unknown";
}

const char* to_string(DataKind k) { return k == DataKind::cauchy ? "cauchy" : "two_point_bvp"; }

// ---------------------------------------------------------------- regions

ConvexRegion ConvexRegion::make_polygon(std::vector<Point2> pts) {
    if (polygon_area(pts) < 0.0) std::reverse(pts.begin(), pts.end());
    ConvexRegion r;
    r.kind = Kind::polygon;
    r.polygon = std::move(pts);
    return r;
}

ConvexRegion ConvexRegion::make_ellipse(Point2 c, double a, double b) {
    ConvexRegion r;
    r.kind = Kind::ellipse;
    r.center = c;
    r.a = a;
    r.b = b;
    return r;
}

bool ConvexRegion::contains(Point2 x, double tol) const {
    switch (kind) {
        case Kind::whole: return true;
        case Kind::polygon: return point_in_convex_polygon(polygon, x, tol);
        case Kind::ellipse: {
            const Vec2 y = x - center;
            const double f = std::sqrt((y.x / a) * (y.x / a) + (y.y / b) * (y.y / b));
            return f <= 1.0 + tol / std::min(a, b);
        }
    }
    return false;
}

std::optional<std::pair<double, double>> ConvexRegion::chord(Point2 p, Vec2 u) const {
    switch (kind) {
        case Kind::whole: return std::nullopt;
        case Kind::polygon: {
            double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
            const std::size_t m = polygon.size();
            for (std::size_t i = 0; i < m; ++i) {
                const Point2 v0 = polygon[i], v1 = polygon[(i + 1) % m];
                const Vec2 e = v1 - v0;
                // inside: cross(e, x - v0) >= 0
                const double f0 = cross(e, p - v0), df = cross(e, u);
                if (std::abs(df) <= 1e-15 * norm(e)) {
                    if (f0 < 0.0) return std::nullopt;
                    continue;
                }
                const double t = -f0 / df;
                if (df > 0.0) lo = std::max(lo, t);
                else hi = std::min(hi, t);
            }
            if (!(hi > lo)) return std::nullopt;
            return std::make_pair(lo, hi);
        }
        case Kind::ellipse: {
            const Vec2 q = p - center;
            const double A = (u.x / a) * (u.x / a) + (u.y / b) * (u.y / b);
            const double B = 2.0 * ((q.x * u.x) / (a * a) + (q.y * u.y) / (b * b));
            const double C = (q.x / a) * (q.x / a) + (q.y / b) * (q.y / b) - 1.0;
            const double disc = B * B - 4.0 * A * C;
            if (!(disc > 0.0)) return std::nullopt;
            const double sq = std::sqrt(disc);
            // stable quadratic roots
            const double qq = -0.5 * (B + std::copysign(sq, B));
            double t0 = qq / A, t1 = C / qq;
            if (qq == 0.0) t0 = t1 = 0.0;
            if (t0 > t1) std::swap(t0, t1);
            return std::make_pair(t0, t1);
        }
    }
    return std::nullopt;
}

std::pair<double, double> ConvexRegion::support(Vec2 n) const {
    switch (kind) {
        case Kind::polygon: {
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (const auto& p : polygon) {
                lo = std::min(lo, dot(n, p));
                hi = std::max(hi, dot(n, p));
            }
            return {lo, hi};
        }
        case Kind::ellipse: {
            const double r = std::hypot(a * n.x, b * n.y);
            return {dot(n, center) - r, dot(n, center) + r};
        }
        case Kind::whole: break;
    }
    fail(ErrorKind::parameter, "support of an unbounded region");
}

Partition::Partition(Domain domain, AirySign sign, std::vector<Region> regions)
    : domain_(std::move(domain)), sign_(sign), regions_(std::move(regions)) {}

int Partition::region_index(Point2 x) const {
    const double tol = 1e-12 * domain_.diameter();
    if (!domain_.contains(x, 1e-10 * domain_.diameter())) return -1;
    for (std::size_t i = 0; i < regions_.size(); ++i)
        if (regions_[i].shape.contains(x, tol)) return static_cast<int>(i);
    // numerical slack on shared edges
    for (std::size_t i = 0; i < regions_.size(); ++i)
        if (regions_[i].shape.contains(x, 1e-9 * domain_.diameter())) return static_cast<int>(i);
    return -1;
}

RegionLabel Partition::label_at(Point2 x) const {
    const double scale = domain_.diameter();
    if (!domain_.contains(x, 1e-10 * scale)) return RegionLabel::outside;
    if (has_sigma() && sigma().distance(x) <= 1e-9 * scale) return RegionLabel::sigma;
    const int i = region_index(x);
    return i < 0 ? RegionLabel::outside : regions_[i].label;
}

bool Partition::is_empty(RegionLabel l) const {
    if (l == RegionLabel::sigma) return !has_sigma();
    for (const auto& r : regions_)
        if (r.label == l) return false;
    return true;
}

std::vector<MedialSegment> Partition::interfaces() const {
    std::vector<MedialSegment> out;
    const double scale = domain_.diameter();
    for (const auto& r : regions_) {
        if (r.shape.kind != ConvexRegion::Kind::polygon) continue;
        const auto& p = r.shape.polygon;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const Point2 a = p[i], b = p[(i + 1) % p.size()];
            if (domain_.boundary_distance(0.5 * (a + b)) <= 1e-9 * scale) continue;
            bool dup = false;
            for (const auto& s : out)
                dup = dup || (norm(s.a - b) <= 1e-9 * scale && norm(s.b - a) <= 1e-9 * scale) ||
                      (norm(s.a - a) <= 1e-9 * scale && norm(s.b - b) <= 1e-9 * scale);
            if (!dup) out.push_back({a, b});
        }
    }
    return out;
}

std::vector<RegionLabel> Partition::mask(const MaskedGrid& grid) const {
    std::vector<RegionLabel> out(static_cast<std::size_t>(grid.nx()) * grid.ny(), RegionLabel::outside);
    const auto axis = has_sigma() ? sigma().polyline(512) : std::vector<MedialSegment>{};
    const auto& iso = sigma().points;
    const double reach = 0.5 * std::hypot(grid.dx(), grid.dy());
    parallel_for(grid.ny(), [&](std::size_t jj) {
        const int j = static_cast<int>(jj);
        for (int i = 0; i < grid.nx(); ++i) {
            if (grid.cell(i, j) == MaskedGrid::outside) continue;
            Point2 x = grid.center(i, j);
            if (!grid.center_inside(i, j)) {
                for (int b = 0; b < MaskedGrid::sub; ++b)
                    for (int a = 0; a < MaskedGrid::sub; ++a)
                        if (grid.subpoint_inside(i, j, a, b)) x = grid.subpoint(i, j, a, b);
            }
            RegionLabel l = RegionLabel::outside;
            if (has_sigma()) {
                const Point2 c = grid.center(i, j);
                bool near = false;
                for (const auto& p : iso) near = near || norm(c - p) <= reach;
                for (const auto& s : axis) {
                    if (near) break;
                    near = segment_distance(c, s.a, s.b) <= reach;
                }
                if (near) l = RegionLabel::sigma;
            }
            if (l == RegionLabel::outside) {
                const int r = region_index(x);
                l = r < 0 ? RegionLabel::outside : regions_[r].label;
            }
            out[grid.index(i, j)] = l;
        }
    });
    return out;
}

namespace {

struct RectFrame {
    double a, b;
    Point2 c;
    Point2 g(double x, double y) const { return c + Vec2{x, y}; }
};

std::vector<Region> rectangle_regions(const Rectangle& r) {
    const RectFrame f{r.a, r.b, r.center};
    const double a = r.a, b = r.b;
    std::vector<Region> out;
    auto poly = [](std::vector<Point2> p) { return ConvexRegion::make_polygon(std::move(p)); };
    out.push_back({"T_ne", RegionLabel::ordered, poly({f.g(a, 0), f.g(a, b), f.g(a - b, b)})});
    out.push_back({"T_se", RegionLabel::ordered, poly({f.g(a - b, -b), f.g(a, -b), f.g(a, 0)})});
    out.push_back({"T_nw", RegionLabel::ordered, poly({f.g(-a, 0), f.g(-a + b, b), f.g(-a, b)})});
    out.push_back({"T_sw", RegionLabel::ordered, poly({f.g(-a, 0), f.g(-a, -b), f.g(-a + b, -b)})});
    if (a - b > 1e-12 * a)
        out.push_back({"R_c", RegionLabel::ordered,
                       poly({f.g(-a + b, -b), f.g(a - b, -b), f.g(a - b, b), f.g(-a + b, b)})});
    out.push_back({"T_r", RegionLabel::unconstrained, poly({f.g(a - b, -b), f.g(a, 0), f.g(a - b, b)})});
    out.push_back({"T_l", RegionLabel::unconstrained, poly({f.g(-a + b, b), f.g(-a, 0), f.g(-a + b, -b)})});
    return out;
}

std::vector<Region> tangential_regions(const Domain& d, const Incircle& ic) {
    const auto poly = d.polygon();
    const auto& nu = d.side_normals();
    const std::size_t n = poly.size();
    std::vector<Point2> contact;
    for (std::size_t i = 0; i < n; ++i) contact.push_back(ic.center + ic.radius * nu[i]);
    std::vector<Region> out;
    for (std::size_t k = 0; k < n; ++k) {
        out.push_back({"T_" + std::to_string(k), RegionLabel::ordered,
                       ConvexRegion::make_polygon({contact[(k + n - 1) % n], poly[k], contact[k]})});
    }
    out.push_back({"contact", RegionLabel::unconstrained, ConvexRegion::make_polygon(contact)});
    return out;
}

EndKind classify_end(const Domain& d, Point2 p) {
    const double scale = d.diameter();
    if (!d.contains(p, 1e-9 * scale)) return EndKind::boundary;
    if (d.boundary_distance(p) > 1e-9 * scale) return EndKind::interface;
    for (const auto& c : d.corners())
        if (norm(c - p) <= 1e-9 * scale) return EndKind::corner;
    return EndKind::boundary;
}

std::vector<double> lattice_1d(double lo, double hi, double spacing) {
    std::vector<double> out;
    const long k0 = static_cast<long>(std::floor(lo / spacing + 1e-9)) + 1;
    const long k1 = static_cast<long>(std::ceil(hi / spacing - 1e-9)) - 1;
    for (long k = k0; k <= k1; ++k) out.push_back(k * spacing);
    return out;
}

class ParallelGroup final : public LineGroup {
public:
    ParallelGroup(std::string name, const Domain& d, ConvexRegion region, Vec2 u, bool unconstrained)
        : name_(std::move(name)), d_(d), region_(std::move(region)), u_(normalized(u)), eta_{u_.y, -u_.x},
          unconstrained_(unconstrained) {}

    std::string name() const override { return name_; }
    DataKind data_kind() const override { return DataKind::two_point_bvp; }
    RhoKind rho_kind() const override { return RhoKind::constant; }
    bool unconstrained() const override { return unconstrained_; }
    const ConvexRegion* region() const override { return &region_; }

    std::optional<LineCoord> locate(Point2 x) const override {
        if (!region_.contains(x, 1e-12 * d_.diameter())) return std::nullopt;
        const double s = dot(x, eta_);
        const auto ch = region_.chord(s * eta_, u_);
        if (!ch) return LineCoord{0, s, 0.0, 0.0, eta_};
        const double t = std::clamp(dot(x, u_) - ch->first, 0.0, ch->second - ch->first);
        return LineCoord{0, s, t, ch->second - ch->first, eta_};
    }

    std::optional<StableLine> line_at(int, double s) const override {
        const auto ch = region_.chord(s * eta_, u_);
        if (!ch || ch->second - ch->first <= 1e-12 * d_.diameter()) return std::nullopt;
        StableLine l;
        l.start = s * eta_ + ch->first * u_;
        l.end = s * eta_ + ch->second * u_;
        l.eta = eta_;
        l.index = s;
        l.start_kind = classify_end(d_, l.start);
        l.end_kind = classify_end(d_, l.end);
        return l;
    }

    std::vector<std::pair<int, double>> lattice(double spacing) const override {
        const auto [lo, hi] = region_.support(eta_);
        std::vector<std::pair<int, double>> out;
        for (double s : lattice_1d(lo, hi, spacing)) out.push_back({0, s});
        return out;
    }

private:
    std::string name_;
    Domain d_;
    ConvexRegion region_;
    Vec2 u_, eta_;
    bool unconstrained_;
};

// Rays through the point (0, -R) of the half-disc frame, indexed by where they
// cross the flat side.
class RayGroup final : public LineGroup {
public:
    explicit RayGroup(const Domain& d) : d_(d), R_(std::get<HalfDisc>(d.shape()).radius) {}

    std::string name() const override { return "rays"; }
    DataKind data_kind() const override { return DataKind::two_point_bvp; }
    RhoKind rho_kind() const override { return RhoKind::proportional_to_r; }

    std::optional<LineCoord> locate(Point2 x) const override {
        if (!d_.contains(x, 1e-12 * d_.diameter())) return std::nullopt;
        const Point2 y = d_.to_local(x);
        const Vec2 p{y.x, y.y + R_};
        const double r = norm(p);
        const double sin_t = p.y / r;
        const double r0 = R_ / sin_t, r1 = 2.0 * R_ * sin_t;
        const double s = R_ * p.x / p.y;
        return LineCoord{0, s, std::clamp(r - r0, 0.0, r1 - r0), r1 - r0, eta_of(p / r)};
    }

    std::optional<StableLine> line_at(int, double s) const override {
        if (!(std::abs(s) < R_)) return std::nullopt;
        const double theta = std::atan2(R_, s);
        const Vec2 w = unit(theta);
        StableLine l;
        l.start = d_.to_global({s, 0.0});
        l.end = d_.to_global(2.0 * R_ * std::sin(theta) * w - Vec2{0.0, R_});
        if (l.length() <= 1e-12 * R_) return std::nullopt;
        l.eta = eta_of(w);
        l.index = s;
        l.start_kind = classify_end(d_, l.start);
        l.end_kind = classify_end(d_, l.end);
        return l;
    }

    std::vector<std::pair<int, double>> lattice(double spacing) const override {
        std::vector<std::pair<int, double>> out;
        for (double s : lattice_1d(-R_, R_, spacing)) out.push_back({0, s});
        return out;
    }

    double rho_raw(int, double s, double t) const override { return std::hypot(s, R_) + t; }

private:
    Vec2 eta_of(Vec2 w_local) const {
        const Vec2 u = d_.vec_to_global(w_local);
        return {u.y, -u.x};
    }
    Domain d_;
    double R_;
};

// Quickest-exit segments from the medial axis to the boundary, one sub-family
// per boundary piece, indexed by arclength along the piece.
class ExitGroup final : public LineGroup {
public:
    explicit ExitGroup(const Domain& d) : d_(d) {}

    std::string name() const override { return "exit"; }
    DataKind data_kind() const override { return DataKind::cauchy; }
    RhoKind rho_kind() const override {
        if (d_.is_polygonal()) return RhoKind::constant;
        if (d_.kind() == ShapeKind::disc) return RhoKind::proportional_to_r;
        return RhoKind::general;
    }

    std::optional<LineCoord> locate(Point2 x) const override {
        if (!d_.contains(x, 1e-12 * d_.diameter())) return std::nullopt;
        const auto np = d_.nearest_boundary_point(x);
        const auto& piece = d_.pieces()[np.piece];
        const double L = d_.exit_length(np.piece, np.param);
        const Vec2 nu = piece.normal(np.param);
        LineCoord c;
        c.sub = static_cast<int>(np.piece);
        c.s = piece.arclength(np.param);
        c.length = L;
        c.t = std::clamp(L - np.distance, 0.0, L);
        c.eta = {nu.y, -nu.x};
        return c;
    }

    std::optional<StableLine> line_at(int sub, double s) const override {
        const auto& piece = d_.pieces().at(sub);
        const double t = piece.param_at_arclength(s);
        const double L = d_.exit_length(sub, t);
        if (L <= 1e-12 * d_.diameter()) return std::nullopt;
        const Vec2 nu = piece.normal(t);
        StableLine l;
        l.end = piece.point(t);
        l.start = l.end - L * nu;
        l.eta = {nu.y, -nu.x};
        l.index = s;
        l.sub = sub;
        l.start_kind = d_.kind() == ShapeKind::disc ? EndKind::focal_point : EndKind::medial_axis;
        l.end_kind = classify_end(d_, l.end);
        return l;
    }

    std::vector<std::pair<int, double>> lattice(double spacing) const override {
        std::vector<std::pair<int, double>> out;
        for (std::size_t i = 0; i < d_.pieces().size(); ++i) {
            const double len = d_.pieces()[i].length();
            const long n = std::max(1L, std::lround(len / spacing));
            for (long j = 0; j < n; ++j) out.push_back({static_cast<int>(i), (j + 0.5) * len / n});
        }
        return out;
    }

    double rho_raw(int sub, double s, double t) const override {
        const auto& piece = d_.pieces().at(sub);
        const double p = piece.param_at_arclength(s);
        const double L = d_.exit_length(sub, p);
        return 1.0 - (L - t) * piece.curvature(p);
    }

    double period(int sub) const override {
        const auto& piece = d_.pieces().at(sub);
        if (piece.kind != PieceKind::segment && piece.t1 - piece.t0 >= 2.0 * pi - 1e-12) return piece.length();
        return 0.0;
    }

private:
    Domain d_;
};

// User chords in U; points take the nearest chord.
class ChordListGroup final : public LineGroup {
public:
    ChordListGroup(const Domain& d, ConvexRegion region, std::vector<StableLine> chords)
        : d_(d), region_(std::move(region)), chords_(std::move(chords)) {
        double len = 0.0;
        for (const auto& c : chords_) len += c.length();
        const double area = region_.kind == ConvexRegion::Kind::polygon
                                ? polygon_area(region_.polygon)
                                : pi * region_.a * region_.b;
        snap_ = 1.5 * area / std::max(len, 1e-300);
    }
    std::string name() const override { return "chords"; }
    DataKind data_kind() const override { return DataKind::two_point_bvp; }
    RhoKind rho_kind() const override { return RhoKind::constant; }
    bool unconstrained() const override { return true; }
    const ConvexRegion* region() const override { return &region_; }

    std::optional<LineCoord> locate(Point2 x) const override {
        if (!region_.contains(x, 1e-12 * d_.diameter())) return std::nullopt;
        double best = std::numeric_limits<double>::infinity();
        std::size_t k = 0;
        for (std::size_t i = 0; i < chords_.size(); ++i) {
            const double dd = segment_distance(x, chords_[i].start, chords_[i].end);
            if (dd < best) {
                best = dd;
                k = i;
            }
        }
        if (chords_.empty() || best > snap_) return std::nullopt;
        const auto& c = chords_[k];
        const double t = std::clamp(dot(x - c.start, c.direction()), 0.0, c.length());
        return LineCoord{0, static_cast<double>(k), t, c.length(), c.eta};
    }
    std::optional<StableLine> line_at(int, double s) const override {
        const long k = std::lround(s);
        if (k < 0 || k >= static_cast<long>(chords_.size())) return std::nullopt;
        return chords_[k];
    }
    std::vector<std::pair<int, double>> lattice(double) const override {
        std::vector<std::pair<int, double>> out;
        for (std::size_t i = 0; i < chords_.size(); ++i) out.push_back({0, static_cast<double>(i)});
        return out;
    }

private:
    Domain d_;
    ConvexRegion region_;
    std::vector<StableLine> chords_;
    double snap_ = 0.0;
};

bool segments_cross(Point2 a, Point2 b, Point2 c, Point2 d, double tol) {
    const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
    return ((d1 > tol && d2 < -tol) || (d1 < -tol && d2 > tol)) && ((d3 > tol && d4 < -tol) || (d3 < -tol && d4 > tol));
}

std::shared_ptr<const LineGroup> u_group(const Domain& d, const Region& r, const UDecomposition& u) {
    if (u.kind == UDecomposition::Kind::chords) {
        const double scale = d.diameter();
        std::vector<StableLine> lines;
        for (const auto& [p, q] : u.chords) {
            if (!r.shape.contains(0.5 * (p + q), 1e-12 * scale)) continue;
            if (d.boundary_distance(p) > 1e-9 * scale || d.boundary_distance(q) > 1e-9 * scale)
                fail(ErrorKind::parameter, "user chords must end on the boundary");
            StableLine l;
            l.start = p;
            l.end = q;
            const Vec2 w = normalized(q - p);
            l.eta = {w.y, -w.x};
            l.index = static_cast<double>(lines.size());
            lines.push_back(l);
        }
        for (std::size_t i = 0; i < lines.size(); ++i)
            for (std::size_t j = i + 1; j < lines.size(); ++j)
                if (segments_cross(lines[i].start, lines[i].end, lines[j].start, lines[j].end, 1e-12 * scale * scale))
                    fail(ErrorKind::parameter, "user chords intersect");
        return std::make_shared<ChordListGroup>(d, r.shape, std::move(lines));
    }
    return std::make_shared<ParallelGroup>(r.name, d, r.shape, unit(u.resolved_angle()), true);
}

}  // namespace

double UDecomposition::resolved_angle() const {
    if (kind == Kind::random) {
        std::mt19937_64 rng(seed);
        return std::uniform_real_distribution<double>(0.0, pi)(rng);
    }
    return angle;
}

Partition partition(const Domain& domain, const AiryField& airy) {
    if (!(airy.domain() == domain)) fail(ErrorKind::consistency, "Airy field belongs to a different domain");
    if (airy.model() == "identity") fail(ErrorKind::consistency, "partition needs the optimal Airy field");
    if (airy.sign() == AirySign::minus)
        return Partition(domain, AirySign::minus, {{"O", RegionLabel::ordered, {}}});
    switch (domain.kind()) {
        case ShapeKind::disc: {
            const auto& dd = std::get<Disc>(domain.shape());
            return Partition(domain, AirySign::plus,
                             {{"U", RegionLabel::unconstrained, ConvexRegion::make_ellipse(dd.center, dd.radius, dd.radius)}});
        }
        case ShapeKind::ellipse:
        case ShapeKind::half_disc: return Partition(domain, AirySign::plus, {{"O", RegionLabel::ordered, {}}});
        case ShapeKind::rectangle:
            return Partition(domain, AirySign::plus, rectangle_regions(std::get<Rectangle>(domain.shape())));
        case ShapeKind::convex_polygon: {
            if (const auto ic = incircle(domain)) return Partition(domain, AirySign::plus, tangential_regions(domain, *ic));
            break;
        }
    }
    fail(ErrorKind::not_implemented, "partition of " + domain.describe());
}

std::vector<std::shared_ptr<const LineGroup>> line_groups(const Domain& domain, const AiryField& airy,
                                                          const UDecomposition& u) {
    const Partition part = partition(domain, airy);
    std::vector<std::shared_ptr<const LineGroup>> groups;
    if (airy.sign() == AirySign::minus) {
        groups.push_back(std::make_shared<ExitGroup>(domain));
        return groups;
    }
    const double s = 1.0 / std::sqrt(2.0);
    switch (domain.kind()) {
        case ShapeKind::disc: groups.push_back(u_group(domain, part.regions()[0], u)); break;
        case ShapeKind::ellipse: {
            const auto& e = std::get<Ellipse>(domain.shape());
            groups.push_back(std::make_shared<ParallelGroup>("E", domain, ConvexRegion::make_ellipse(e.center, e.a, e.b),
                                                             Vec2{0.0, 1.0}, false));
            break;
        }
        case ShapeKind::half_disc: groups.push_back(std::make_shared<RayGroup>(domain)); break;
        case ShapeKind::rectangle: {
            for (const auto& r : part.regions()) {
                Vec2 dir{0.0, 1.0};
                if (r.name == "T_ne" || r.name == "T_sw") dir = {s, -s};
                else if (r.name == "T_se" || r.name == "T_nw") dir = {s, s};
                if (r.label == RegionLabel::unconstrained) groups.push_back(u_group(domain, r, u));
                else groups.push_back(std::make_shared<ParallelGroup>(r.name, domain, r.shape, dir, false));
            }
            break;
        }
        case ShapeKind::convex_polygon: {
            const auto ic = incircle(domain);
            const auto poly = domain.polygon();
            for (const auto& r : part.regions()) {
                if (r.label == RegionLabel::unconstrained) {
                    groups.push_back(u_group(domain, r, u));
                    continue;
                }
                const int k = std::stoi(r.name.substr(2));
                const Vec2 ahat = normalized(poly[k] - ic->center);
                groups.push_back(std::make_shared<ParallelGroup>(r.name, domain, r.shape, perp(ahat), false));
            }
            break;
        }
    }
    return groups;
}

StableLineFamily stable_lines(const Domain& domain, const AiryField& airy, double spacing, const UDecomposition& u) {
    if (!(spacing > 0.0) || !std::isfinite(spacing)) fail(ErrorKind::parameter, "line spacing must be positive");
    StableLineFamily fam;
    fam.spacing = spacing;
    fam.groups = line_groups(domain, airy, u);
    for (std::size_t g = 0; g < fam.groups.size(); ++g) {
        for (const auto& [sub, s] : fam.groups[g]->lattice(spacing)) {
            if (auto l = fam.groups[g]->line_at(sub, s)) {
                l->group = static_cast<int>(g);
                l->sub = sub;
                fam.lines.push_back(*l);
            }
        }
    }
    return fam;
}

RhoKind StableLineFamily::rho_kind() const {
    bool prop = false, general = false;
    for (const auto& g : groups) {
        prop = prop || g->rho_kind() == RhoKind::proportional_to_r;
        general = general || g->rho_kind() == RhoKind::general;
    }
    if (general) return RhoKind::general;
    return prop ? RhoKind::proportional_to_r : RhoKind::constant;
}

std::optional<std::pair<int, LineCoord>> StableLineFamily::locate(Point2 x) const {
    for (std::size_t g = 0; g < groups.size(); ++g)
        if (auto c = groups[g]->locate(x)) return std::make_pair(static_cast<int>(g), *c);
    return std::nullopt;
}

Vec2 StableLineFamily::eta(Point2 x) const {
    const auto loc = locate(x);
    if (!loc) fail(ErrorKind::lookup, "point is not on a stable line");
    return loc->second.eta;
}

RhoSample StableLineFamily::rho(Point2 x) const {
    const auto loc = locate(x);
    if (!loc) fail(ErrorKind::lookup, "point is not on a stable line");
    const auto& g = *groups[loc->first];
    const auto& c = loc->second;
    double ref = g.rho_raw(c.sub, c.s, 0.0);
    if (ref <= 1e-14) ref = g.rho_raw(c.sub, c.s, c.length);
    const double v = g.rho_raw(c.sub, c.s, c.t);
    RhoSample out;
    out.value = ref > 0.0 ? v / ref : 0.0;
    out.singular = out.value <= 1e-14;
    return out;
}

}  // namespace wrinkle
