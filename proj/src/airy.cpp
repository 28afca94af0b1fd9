#include "wrinkle/airy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "wrinkle/error.hpp"

namespace wrinkle {

const char* to_string(AirySign s) { return s == AirySign::plus ? "plus" : "minus"; }

namespace {

HessianAC rank_zero() { return {}; }

HessianAC rank_one(double zeta, Vec2 eta) {
    HessianAC h;
    h.matrix = zeta * outer(eta);
    h.zeta = zeta;
    h.eta = eta;
    h.rank = zeta > 0.0 ? 1 : 0;
    return h;
}

// phi(x) = phi_loc(y) + c . x - |c|^2/2 with x = c + Q y
class Framed : public AiryModel {
public:
    Framed(Point2 c, double rot) : c_(c), rot_(rot) {}
    double value(Point2 x) const final { return local_value(loc(x)) + dot(c_, x) - 0.5 * norm2(c_); }
    Vec2 gradient(Point2 x) const final { return rotated(local_gradient(loc(x)), rot_) + c_; }
    HessianAC hessian(Point2 x) const final {
        HessianAC h = local_hessian(loc(x));
        if (h.rank == 1) return rank_one(h.zeta, rotated(h.eta, rot_));
        if (h.rank == 2) {
            const Vec2 e1 = rotated({1.0, 0.0}, rot_), e2 = rotated({0.0, 1.0}, rot_);
            h.matrix = h.matrix.xx * outer(e1) + h.matrix.yy * outer(e2) + 2.0 * h.matrix.xy * sym_outer(e1, e2);
        }
        return h;
    }

protected:
    virtual double local_value(Point2 y) const = 0;
    virtual Vec2 local_gradient(Point2 y) const = 0;
    virtual HessianAC local_hessian(Point2 y) const = 0;

private:
    Point2 loc(Point2 x) const { return rotated(x - c_, -rot_); }
    Point2 c_;
    double rot_;
};

class IdentityModel final : public AiryModel {
public:
    std::string name() const override { return "identity"; }
    double value(Point2 x) const override { return 0.5 * norm2(x); }
    Vec2 gradient(Point2 x) const override { return x; }
    HessianAC hessian(Point2) const override {
        HessianAC h;
        h.matrix = identity2();
        h.zeta = 1.0;
        h.rank = 2;
        return h;
    }
};

class DiscPlus final : public Framed {
public:
    explicit DiscPlus(const Disc& d) : Framed(d.center, 0.0), R_(d.radius) {}
    std::string name() const override { return "disc_plus"; }

protected:
    double local_value(Point2) const override { return 0.5 * R_ * R_; }
    Vec2 local_gradient(Point2) const override { return {}; }
    HessianAC local_hessian(Point2) const override { return rank_zero(); }

private:
    double R_;
};

class EllipsePlus final : public Framed {
public:
    explicit EllipsePlus(const Ellipse& e) : Framed(e.center, 0.0), b_(e.b), s_(1.0 - e.b * e.b / (e.a * e.a)) {}
    std::string name() const override { return "ellipse_plus"; }

protected:
    double local_value(Point2 y) const override { return 0.5 * (b_ * b_ + s_ * y.x * y.x); }
    Vec2 local_gradient(Point2 y) const override { return {s_ * y.x, 0.0}; }
    HessianAC local_hessian(Point2) const override { return rank_one(s_, {1.0, 0.0}); }

private:
    double b_, s_;
};

// Local frame: centre at the origin, arc above the flat side. With p = y + R e2
// the rays through the origin of p carry the line segments.
class HalfDiscPlus final : public Framed {
public:
    explicit HalfDiscPlus(const HalfDisc& h) : Framed(h.center, h.orientation - pi / 2), R_(h.radius) {}
    std::string name() const override { return "half_disc_plus"; }

protected:
    double local_value(Point2 y) const override {
        const Vec2 p{y.x, y.y + R_};
        return R_ * norm2(p) / (2.0 * p.y) - 0.5 * R_ * R_;
    }
    Vec2 local_gradient(Point2 y) const override {
        const Vec2 p{y.x, y.y + R_};
        return {R_ * p.x / p.y, R_ - R_ * norm2(p) / (2.0 * p.y * p.y)};
    }
    HessianAC local_hessian(Point2 y) const override {
        const Vec2 p{y.x, y.y + R_};
        const double r = norm(p);
        return rank_one(R_ * r * r / (p.y * p.y * p.y), Vec2{-p.y, p.x} / r);
    }

private:
    double R_;
};

class RectanglePlus final : public Framed {
public:
    explicit RectanglePlus(const Rectangle& r) : Framed(r.center, 0.0), a_(r.a), b_(r.b) {}
    std::string name() const override { return "rectangle_plus"; }

    enum Region { ne, se, nw, sw, right, left, central };
    Region region(Point2 y) const {
        if (y.x + y.y > a_) return ne;
        if (y.x - y.y > a_) return se;
        if (-y.x + y.y > a_) return nw;
        if (-y.x - y.y > a_) return sw;
        if (y.x > a_ - b_) return right;
        if (y.x < -(a_ - b_)) return left;
        return central;
    }

protected:
    double local_value(Point2 y) const override {
        const double a = a_, b = b_;
        switch (region(y)) {
            case ne: return 0.5 * std::pow(y.x + y.y, 2) - b * y.x - a * y.y + a * b;
            case se: return 0.5 * std::pow(y.x - y.y, 2) - b * y.x + a * y.y + a * b;
            case nw: return 0.5 * std::pow(y.y - y.x, 2) + b * y.x - a * y.y + a * b;
            case sw: return 0.5 * std::pow(y.x + y.y, 2) + b * y.x + a * y.y + a * b;
            case right: return a * b - 0.5 * a * a + (a - b) * y.x;
            case left: return a * b - 0.5 * a * a - (a - b) * y.x;
            case central: return 0.5 * (y.x * y.x + b * b);
        }
        return 0.0;
    }
    Vec2 local_gradient(Point2 y) const override {
        const double a = a_, b = b_;
        switch (region(y)) {
            case ne: return {y.x + y.y - b, y.x + y.y - a};
            case se: return {y.x - y.y - b, y.y - y.x + a};
            case nw: return {y.x - y.y + b, y.y - y.x - a};
            case sw: return {y.x + y.y + b, y.x + y.y + a};
            case right: return {a - b, 0.0};
            case left: return {-(a - b), 0.0};
            case central: return {y.x, 0.0};
        }
        return {};
    }
    HessianAC local_hessian(Point2 y) const override {
        const double s = 1.0 / std::sqrt(2.0);
        switch (region(y)) {
            case ne:
            case sw: return rank_one(2.0, {s, s});
            case se:
            case nw: return rank_one(2.0, {s, -s});
            case right:
            case left: return rank_zero();
            case central: return rank_one(1.0, {1.0, 0.0});
        }
        return {};
    }

private:
    double a_, b_;
};

// Tangential polygon: triangles T_k at the vertices cut off by the chords
// joining neighbouring contact points, and the contact polygon in between.
class TangentialPlus final : public Framed {
public:
    TangentialPlus(const Domain& d, Incircle ic) : Framed(ic.center, 0.0), r_(ic.radius) {
        const auto poly = d.polygon();
        const auto& nu = d.side_normals();
        const std::size_t n = poly.size();
        // contact point of side i, relative to the incentre
        for (std::size_t i = 0; i < n; ++i) contact_.push_back(r_ * nu[i]);
        for (std::size_t k = 0; k < n; ++k) {
            const Vec2 a = poly[k] - ic.center;
            const double len = norm(a);
            const double ell = std::sqrt(std::max(0.0, len * len - r_ * r_));
            vertex_.push_back(a);
            tan2_.push_back((r_ / ell) * (r_ / ell));
        }
    }
    std::string name() const override { return "tangential_polygon_plus"; }

    // index of the vertex triangle containing y, or -1 for the contact polygon
    int triangle(Point2 y) const {
        const std::size_t n = contact_.size();
        for (std::size_t k = 0; k < n; ++k) {
            const Vec2 t0 = contact_[(k + n - 1) % n], t1 = contact_[k];
            if (cross(t1 - t0, y - t0) < 0.0) return static_cast<int>(k);
        }
        return -1;
    }
    const std::vector<Vec2>& contacts() const { return contact_; }

protected:
    double local_value(Point2 y) const override {
        const int k = triangle(y);
        if (k < 0) return 0.5 * r_ * r_;
        const Vec2 a = vertex_[k];
        const double len = norm(a);
        const double s = dot(y, a) / len;
        return 0.5 * (s * s + tan2_[k] * (len - s) * (len - s));
    }
    Vec2 local_gradient(Point2 y) const override {
        const int k = triangle(y);
        if (k < 0) return {};
        const Vec2 a = vertex_[k];
        const double len = norm(a);
        const double s = dot(y, a) / len;
        return ((1.0 + tan2_[k]) * s - tan2_[k] * len) * (a / len);
    }
    HessianAC local_hessian(Point2 y) const override {
        const int k = triangle(y);
        if (k < 0) return rank_zero();
        return rank_one(1.0 + tan2_[k], normalized(vertex_[k]));
    }

private:
    double r_;
    std::vector<Vec2> contact_;
    std::vector<Vec2> vertex_;
    std::vector<double> tan2_;
};

class MinusModel final : public AiryModel {
public:
    explicit MinusModel(Domain d) : d_(std::move(d)) {}
    std::string name() const override { return std::string(to_string(d_.kind())) + "_minus"; }
    double value(Point2 x) const override {
        const double dist = d_.boundary_distance(x);
        return 0.5 * norm2(x) - 0.5 * dist * dist;
    }
    // equals the nearest boundary point
    Vec2 gradient(Point2 x) const override { return d_.nearest_boundary_point(x).point; }
    HessianAC hessian(Point2 x) const override {
        const auto p = d_.nearest_boundary_point(x);
        const auto& piece = d_.pieces()[p.piece];
        Vec2 grad_d;
        if (p.distance > 0.0) grad_d = (x - p.point) / p.distance;
        else grad_d = -piece.normal(p.param);
        const double k = piece.curvature(p.param);
        return rank_one(1.0 / (1.0 - p.distance * k), perp(grad_d));
    }

private:
    Domain d_;
};

class GenericPlus final : public AiryModel {
public:
    GenericPlus(const Domain& d, int n) : roof_(d, n), h_(1e-6 * d.diameter()) {}
    std::string name() const override { return "convex_roof_plus"; }
    double value(Point2 x) const override { return roof_(x); }
    Vec2 gradient(Point2 x) const override {
        return {(roof_(x + Vec2{h_, 0.0}) - roof_(x - Vec2{h_, 0.0})) / (2.0 * h_),
                (roof_(x + Vec2{0.0, h_}) - roof_(x - Vec2{0.0, h_})) / (2.0 * h_)};
    }
    HessianAC hessian(Point2) const override {
        fail(ErrorKind::not_implemented, "Hessian of the sampled convex roof");
    }

private:
    ConvexRoof roof_;
    double h_;
};

std::shared_ptr<const AiryModel> plus_model(const Domain& d) {
    switch (d.kind()) {
        case ShapeKind::disc: return std::make_shared<DiscPlus>(std::get<Disc>(d.shape()));
        case ShapeKind::ellipse: return std::make_shared<EllipsePlus>(std::get<Ellipse>(d.shape()));
        case ShapeKind::half_disc: return std::make_shared<HalfDiscPlus>(std::get<HalfDisc>(d.shape()));
        case ShapeKind::rectangle: return std::make_shared<RectanglePlus>(std::get<Rectangle>(d.shape()));
        case ShapeKind::convex_polygon: {
            if (const auto ic = incircle(d)) return std::make_shared<TangentialPlus>(d, *ic);
            return nullptr;
        }
    }
    return nullptr;
}

}  // namespace

AiryField::AiryField(Domain domain, AirySign sign, std::shared_ptr<const AiryModel> model)
    : domain_(std::move(domain)), sign_(sign), model_(std::move(model)) {}

AiryField AiryField::identity(const Domain& domain) {
    return AiryField(domain, AirySign::plus, std::make_shared<IdentityModel>());
}

double AiryField::operator()(Point2 x) const {
    if (!domain_.contains(x)) return 0.5 * norm2(x);
    return model_->value(x);
}

Vec2 AiryField::gradient(Point2 x) const {
    if (!domain_.contains(x, 1e-10 * domain_.diameter())) return x;
    return model_->gradient(x);
}

HessianAC AiryField::hessian_ac(Point2 x) const {
    if (!domain_.contains(x, 1e-10 * domain_.diameter())) fail(ErrorKind::domain, "point lies outside the domain");
    return model_->hessian(x);
}

double AiryField::singular_density(Point2 x) const {
    if (sign_ != AirySign::minus) return 0.0;
    const auto pts = domain_.nearest_boundary_points(x, 1e-6 * domain_.diameter());
    if (pts.size() < 2) return 0.0;
    if (domain_.kind() == ShapeKind::disc) return 0.0;  // isolated point, no line measure
    return norm(pts[0].point - pts[1].point);
}

double phi_minus(const Domain& domain, Point2 x) {
    const double d = domain.boundary_distance(x);
    return 0.5 * norm2(x) - 0.5 * d * d;
}

bool has_plus_closed_form(const Domain& domain) { return plus_model(domain) != nullptr; }

double phi_plus(const Domain& domain, Point2 x) {
    const auto m = plus_model(domain);
    if (!m) fail(ErrorKind::not_implemented, "no closed form for " + domain.describe());
    if (!domain.contains(x, 1e-10 * domain.diameter())) fail(ErrorKind::domain, "point lies outside the domain");
    return m->value(x);
}

std::optional<Incircle> incircle(const Domain& domain) {
    if (!domain.is_polygonal()) return std::nullopt;
    const auto& nu = domain.side_normals();
    const auto& c = domain.side_offsets();
    // least squares for nu_i . I + r = c_i
    double A[3][3] = {}, rhs[3] = {};
    for (std::size_t i = 0; i < nu.size(); ++i) {
        const double row[3] = {nu[i].x, nu[i].y, 1.0};
        for (int p = 0; p < 3; ++p) {
            rhs[p] += row[p] * c[i];
            for (int q = 0; q < 3; ++q) A[p][q] += row[p] * row[q];
        }
    }
    // Cramer's rule
    auto det3 = [](double m[3][3]) {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    const double D = det3(A);
    if (std::abs(D) < 1e-14) return std::nullopt;
    double sol[3];
    for (int k = 0; k < 3; ++k) {
        double M[3][3];
        for (int p = 0; p < 3; ++p)
            for (int q = 0; q < 3; ++q) M[p][q] = q == k ? rhs[p] : A[p][q];
        sol[k] = det3(M) / D;
    }
    const Incircle ic{{sol[0], sol[1]}, sol[2]};
    const double scale = domain.diameter();
    if (!(ic.radius > 0.0)) return std::nullopt;
    for (std::size_t i = 0; i < nu.size(); ++i)
        if (std::abs(dot(nu[i], ic.center) + ic.radius - c[i]) > 1e-9 * scale) return std::nullopt;
    return ic;
}

// ---------------------------------------------------------------- convex roof

ConvexRoof::ConvexRoof(const Domain& domain, int n) : domain_(domain) {
    if (n < 16) fail(ErrorKind::resolution, "convex roof needs at least 16 boundary samples");
    for (const auto& b : domain.boundary_sample(n)) {
        pts_.push_back(b.position);
        f_.push_back(0.5 * norm2(b.position));
    }
}

double ConvexRoof::operator()(Point2 x) const {
    if (!domain_.contains(x)) return 0.5 * norm2(x);
    const double scale = domain_.diameter();
    if (domain_.boundary_distance(x) <= 1e-14 * scale) return 0.5 * norm2(x);
    const std::size_t n = pts_.size();
    const double area_tol = 1e-14 * scale * scale;
    const double bary_tol = 1e-12;

    struct Tri {
        std::size_t v[3];
        double w[3];
    };
    auto barycentric = [&](std::size_t i, std::size_t j, std::size_t k, Tri& t) {
        const Vec2 e1 = pts_[j] - pts_[i], e2 = pts_[k] - pts_[i];
        const double area = cross(e1, e2);
        if (std::abs(area) <= area_tol) return false;
        const Vec2 r = x - pts_[i];
        const double wj = cross(r, e2) / area;
        const double wk = cross(e1, r) / area;
        const double wi = 1.0 - wj - wk;
        if (wi < -bary_tol || wj < -bary_tol || wk < -bary_tol) return false;
        t = {{i, j, k}, {wi, wj, wk}};
        return true;
    };

    Tri cur{};
    bool found = false;
    for (std::size_t j = 1; j + 1 < n && !found; ++j) found = barycentric(0, j, j + 1, cur);
    if (!found) fail(ErrorKind::degenerate, "no sample triangle contains the point");

    for (std::size_t iter = 0; iter < 8 * n; ++iter) {
        const std::size_t i = cur.v[0], j = cur.v[1], k = cur.v[2];
        // plane c0 + c . y through the three lifted samples
        const Vec2 e1 = pts_[j] - pts_[i], e2 = pts_[k] - pts_[i];
        const double g1 = f_[j] - f_[i], g2 = f_[k] - f_[i];
        const double D = cross(e1, e2);
        const Vec2 c{(g1 * e2.y - g2 * e1.y) / D, (e1.x * g2 - e2.x * g1) / D};
        const double c0 = f_[i] - dot(c, pts_[i]);
        std::size_t m = n;
        double worst = -1e-13 * scale * scale;
        for (std::size_t q = 0; q < n; ++q) {
            const double gap = f_[q] - (c0 + dot(c, pts_[q]));
            if (gap < worst) {
                worst = gap;
                m = q;
            }
        }
        if (m == n) return c0 + dot(c, x);
        Tri best{};
        double best_w = -1.0;
        for (int slot = 0; slot < 3; ++slot) {
            std::size_t v[3] = {i, j, k};
            v[slot] = m;
            Tri t{};
            if (barycentric(v[0], v[1], v[2], t) && t.w[slot] > best_w) {
                best_w = t.w[slot];
                best = t;
            }
        }
        if (best_w <= 0.0) return c0 + dot(c, x);
        cur = best;
    }
    fail(ErrorKind::degenerate, "convex roof walk did not terminate");
}

double phi_plus_generic(const Domain& domain, Point2 x, int n) {
    if (!domain.contains(x, 1e-10 * domain.diameter())) fail(ErrorKind::domain, "point lies outside the domain");
    return ConvexRoof(domain, n)(x);
}

// ---------------------------------------------------------------- fields

AiryField plus_field(const Domain& domain) {
    if (auto m = plus_model(domain)) return AiryField(domain, AirySign::plus, std::move(m));
    return AiryField(domain, AirySign::plus, std::make_shared<GenericPlus>(domain, 512));
}

AiryField minus_field(const Domain& domain) {
    return AiryField(domain, AirySign::minus, std::make_shared<MinusModel>(domain));
}

AiryField solve_dual(const Domain& domain, const ShellProfile& shell) {
    switch (shell.sign()) {
        case CurvatureSign::positive:
        case CurvatureSign::zero: return plus_field(domain);
        case CurvatureSign::negative: return minus_field(domain);
        case CurvatureSign::mixed: break;
    }
    fail(ErrorKind::unsupported, "mixed-sign curvature");
}

double dual_value(const Domain& domain, const ShellProfile& shell, const AiryField& airy, GridSpec grid) {
    if (!(airy.domain() == domain)) fail(ErrorKind::consistency, "Airy field belongs to a different domain");
    const MaskedGrid g(domain, grid);
    const auto& model = airy.impl();
    return g.integrate([&](Point2 x) { return (model.value(x) - 0.5 * norm2(x)) * shell.curvature(x); });
}

AdmissibilityReport check_admissible(const AiryField& airy, const Domain& domain, double) {
    if (!(airy.domain() == domain)) fail(ErrorKind::consistency, "Airy field belongs to a different domain");
    AdmissibilityReport rep;
    const double scale = domain.diameter();
    const double cutoff = 1e-3 * scale;
    const auto corners = domain.corners();
    const auto& model = airy.impl();
    rep.jump_min = std::numeric_limits<double>::infinity();
    for (const auto& b : domain.boundary_sample(1024)) {
        if (b.corner) continue;
        bool near_corner = false;
        for (const auto& c : corners) near_corner = near_corner || norm(c - b.position) < cutoff;
        if (near_corner) continue;
        ++rep.boundary_samples;
        const Point2 x = b.position;
        rep.trace_max_violation = std::max(rep.trace_max_violation, std::abs(model.value(x) - 0.5 * norm2(x)));
        rep.jump_min = std::min(rep.jump_min, dot(b.nu, x - model.gradient(x)));
    }
    std::mt19937_64 rng(20240611);
    const Box box = domain.bounding_box();
    const double pad = 0.1 * scale;
    std::uniform_real_distribution<double> ux(box.lo.x - pad, box.hi.x + pad), uy(box.lo.y - pad, box.hi.y + pad);
    for (int k = 0; k < 4000; ++k) {
        const Point2 p{ux(rng), uy(rng)}, q{ux(rng), uy(rng)};
        const double mid = airy(0.5 * (p + q));
        const double avg = 0.5 * (airy(p) + airy(q));
        rep.convexity_max_violation = std::max(rep.convexity_max_violation, mid - avg);
        ++rep.pairs;
    }
    return rep;
}

}  // namespace wrinkle
