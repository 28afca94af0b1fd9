#include "wrinkle/herringbone.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "wrinkle/error.hpp"
#include "wrinkle/parallel.hpp"

namespace wrinkle {

namespace {

double frac(double t) { return t - std::floor(t); }

std::string num(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

}  // namespace

double profile_A(double t, double l1, double l2) {
    if (!(l1 >= 0.0 && l2 >= 0.0) || l1 + l2 <= 0.0) fail(ErrorKind::parameter, "profile_A needs l1, l2 >= 0, not both 0");
    const double theta = l1 / (l1 + l2);
    const double f = frac(t);
    return f < theta ? 0.5 * l2 * f : 0.5 * l1 * (1.0 - f);
}

double profile_A_prime(double t, double l1, double l2) {
    if (!(l1 >= 0.0 && l2 >= 0.0) || l1 + l2 <= 0.0) fail(ErrorKind::parameter, "profile_A needs l1, l2 >= 0, not both 0");
    const double theta = l1 / (l1 + l2);
    return frac(t) < theta ? 0.5 * l2 : -0.5 * l1;
}

double smoothstep5(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

double cutoff(double d, double delta) { return smoothstep5((d - 0.5 * delta) / (0.5 * delta)); }

TargetDefect TargetDefect::from(const Sym2& mu) {
    TargetDefect t;
    t.mu = mu;
    t.eig = eigen(mu);
    const double scale = std::max(1.0, std::abs(t.eig.lambda2));
    if (t.eig.lambda1 < -1e-9 * scale) fail(ErrorKind::data, "target defect is not positive semidefinite");
    if (t.eig.lambda1 < 1e-14 * scale) {
        t.eig.lambda1 = 0.0;
        t.mu = t.eig.lambda2 * outer(t.eig.eta2);
    }
    const double tr = t.eig.lambda1 + t.eig.lambda2;
    t.theta = tr > 0.0 ? t.eig.lambda1 / tr : 0.0;
    return t;
}

void HerringboneParams::validate() const {
    for (double v : {l_wr, l_sh, l_avg, delta_int, delta_ext})
        if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorKind::parameter, "herringbone lengths must be positive");
}

HerringboneParams optimal_params(double b, double k, double ratio) {
    if (!(b > 0.0) || !(k > 0.0)) fail(ErrorKind::parameter, "b and k must be positive");
    if (b > k) fail(ErrorKind::parameter, "optimal parameters need b <= k");
    if (ratio < 0.0 || ratio > 1.0) fail(ErrorKind::parameter, "eigenvalue ratio must lie in [0, 1]");
    HerringboneParams p;
    p.l_wr = std::pow(b / k, 0.25);
    p.l_avg = std::pow(p.l_wr, 0.2);
    p.l_sh = std::sqrt(p.l_wr * p.l_avg);
    p.delta_int = p.l_wr;
    p.delta_ext = p.l_sh;
    if (ratio > 0.0 && !(std::pow(p.l_wr, 0.4) < 0.25 * ratio))
        fail(ErrorKind::regime, "l_wr^(2/5) = " + num(std::pow(p.l_wr, 0.4)) + " is not below lambda/(4 Lambda) = " +
                                    num(0.25 * ratio));
    if (!(p.delta_ext < 0.5 * p.l_avg))
        fail(ErrorKind::regime, "delta_ext = " + num(p.delta_ext) + " is not below l_avg/2 = " + num(0.5 * p.l_avg));
    return p;
}

HerringboneParams optimal_params(double b, double k, const TargetDefect& mu) {
    return optimal_params(b, k, mu.eig.lambda2 > 0.0 ? mu.eig.lambda1 / mu.eig.lambda2 : 0.0);
}

void check_single(const HerringboneParams& p, const TargetDefect& mu) {
    p.validate();
    if (!mu.rank_one() && !(p.delta_int < 0.5 * mu.theta * p.l_sh))
        fail(ErrorKind::parameter, "delta_int must be below theta l_sh / 2 = " + num(0.5 * mu.theta * p.l_sh));
}

void check_piecewise(const HerringboneParams& p, double ratio) {
    p.validate();
    if (ratio > 0.0 && !(p.delta_int < 0.25 * ratio * p.l_sh))
        fail(ErrorKind::parameter, "delta_int must be below (lambda/Lambda) l_sh / 4 = " + num(0.25 * ratio * p.l_sh));
    if (!(p.delta_ext < 0.5 * p.l_avg)) fail(ErrorKind::parameter, "delta_ext must be below l_avg / 2");
}

Herringbone::Herringbone(TargetDefect mu, HerringboneParams p, Point2 origin) : mu_(mu), p_(p), origin_(origin) {
    p_.validate();
    n_ = (mu_.eig.eta2 - mu_.eig.eta1) / std::sqrt(2.0);
    s_ = mu_.eig.eta2 + mu_.eig.eta1;
    jumps_ = !mu_.rank_one();
}

double Herringbone::jump_distance(Point2 x) const {
    if (!jumps_) return std::numeric_limits<double>::infinity();
    const double f = frac(dot(x - origin_, n_) / p_.l_sh);
    return p_.l_sh * std::min({f, std::abs(f - mu_.theta), 1.0 - f});
}

Vec2 Herringbone::wrinkle_direction(Point2 x) const {
    if (!jumps_) return mu_.eig.eta2;
    return frac(dot(x - origin_, n_) / p_.l_sh) < mu_.theta ? mu_.eig.eta1 : mu_.eig.eta2;
}

FieldValue Herringbone::at(Point2 x) const {
    const double tr = mu_.trace();
    if (tr <= 0.0) return {};
    const Vec2 y = x - origin_;
    FieldValue out;
    Vec2 eta = mu_.eig.eta2;
    double chi = 1.0;
    if (jumps_) {
        const double t = dot(y, n_) / p_.l_sh;
        const double f = frac(t);
        out.u = std::sqrt(2.0) * p_.l_sh * profile_A(t, mu_.eig.lambda1, mu_.eig.lambda2) * s_;
        eta = f < mu_.theta ? mu_.eig.eta1 : mu_.eig.eta2;
        chi = cutoff(p_.l_sh * std::min({f, std::abs(f - mu_.theta), 1.0 - f}), p_.delta_int);
    }
    if (chi > 0.0) {
        const double s = dot(y, eta) / p_.l_wr;
        out.u += (chi * 0.5 * tr * p_.l_wr * profile_V(s)) * eta;
        out.w = chi * std::sqrt(tr) * p_.l_wr * profile_W(s);
    }
    return out;
}

PiecewiseHerringbone::PiecewiseHerringbone(const Domain& domain, const TargetFunction& mu, HerringboneParams p,
                                           int average_samples, bool check)
    : box_(domain.bounding_box()), p_(p) {
    p_.validate();
    if (average_samples < 1) fail(ErrorKind::parameter, "average_samples must be positive");
    nx_ = std::max(1, static_cast<int>(std::ceil(box_.width() / p_.l_avg - 1e-9)));
    ny_ = std::max(1, static_cast<int>(std::ceil(box_.height() / p_.l_avg - 1e-9)));
    std::vector<Sym2> avg(static_cast<std::size_t>(nx_) * ny_);
    std::vector<int> hits(avg.size(), 0);
    const int m = average_samples;
    parallel_for(avg.size(), [&](std::size_t idx) {
        const int i = static_cast<int>(idx % nx_), j = static_cast<int>(idx / nx_);
        const Box q = square(i, j);
        Sym2 sum{};
        int c = 0;
        for (int b = 0; b < m; ++b)
            for (int a = 0; a < m; ++a) {
                const Point2 x{q.lo.x + (a + 0.5) * p_.l_avg / m, q.lo.y + (b + 0.5) * p_.l_avg / m};
                if (!domain.contains(x)) continue;
                if (auto v = mu(x)) {
                    sum += *v;
                    ++c;
                }
            }
        avg[idx] = c > 0 ? (1.0 / c) * sum : Sym2{};
        hits[idx] = c;
    });
    lmin_ = std::numeric_limits<double>::infinity();
    lmax_ = 0.0;
    pieces_.reserve(avg.size());
    for (std::size_t idx = 0; idx < avg.size(); ++idx) {
        const int i = static_cast<int>(idx % nx_), j = static_cast<int>(idx / nx_);
        const TargetDefect t = TargetDefect::from(avg[idx]);
        if (hits[idx] > 0) {
            lmin_ = std::min(lmin_, t.eig.lambda1);
            lmax_ = std::max(lmax_, t.eig.lambda2);
        }
        pieces_.emplace_back(t, p_, square(i, j).lo);
    }
    if (!std::isfinite(lmin_)) lmin_ = 0.0;
    if (check) check_piecewise(p_, ratio());
}

Box PiecewiseHerringbone::square(int i, int j) const {
    const Point2 lo{box_.lo.x + i * p_.l_avg, box_.lo.y + j * p_.l_avg};
    return {lo, lo + Vec2{p_.l_avg, p_.l_avg}};
}

std::pair<int, int> PiecewiseHerringbone::locate(Point2 x) const {
    const int i = std::clamp(static_cast<int>(std::floor((x.x - box_.lo.x) / p_.l_avg)), 0, nx_ - 1);
    const int j = std::clamp(static_cast<int>(std::floor((x.y - box_.lo.y) / p_.l_avg)), 0, ny_ - 1);
    return {i, j};
}

double PiecewiseHerringbone::edge_distance(Point2 x) const {
    const auto [i, j] = locate(x);
    const Box q = square(i, j);
    return std::min({x.x - q.lo.x, q.hi.x - x.x, x.y - q.lo.y, q.hi.y - x.y});
}

double PiecewiseHerringbone::external_cutoff(Point2 x) const {
    const auto [i, j] = locate(x);
    const Box q = square(i, j);
    return cutoff(std::min(x.x - q.lo.x, q.hi.x - x.x), p_.delta_ext) *
           cutoff(std::min(x.y - q.lo.y, q.hi.y - x.y), p_.delta_ext);
}

bool PiecewiseHerringbone::bulk(Point2 x) const {
    const auto [i, j] = locate(x);
    return edge_distance(x) >= p_.delta_ext && piece(i, j).bulk(x);
}

Sym2 PiecewiseHerringbone::averaged_target(Point2 x) const {
    const auto [i, j] = locate(x);
    return piece(i, j).target().mu;
}

FieldValue PiecewiseHerringbone::at(Point2 x) const {
    const double chi = external_cutoff(x);
    if (chi <= 0.0) return {};
    const auto [i, j] = locate(x);
    FieldValue v = piece(i, j).at(x);
    v.u *= chi;
    v.w *= chi;
    return v;
}

DisplacementField herringbone(Box square, const TargetDefect& mu, const HerringboneParams& p, double h) {
    check_single(p, mu);
    if (h > p.l_wr / 16.0 * (1.0 + 1e-12)) fail(ErrorKind::resolution, "grid spacing must resolve l_wr / 16");
    return DisplacementField::sample(Herringbone(mu, p, square.lo), square, h);
}

DisplacementField piecewise_herringbone(const Domain& domain, const TargetFunction& mu, const HerringboneParams& p,
                                        double h) {
    if (h > p.l_wr / 16.0 * (1.0 + 1e-12)) fail(ErrorKind::resolution, "grid spacing must resolve l_wr / 16");
    return DisplacementField::sample(PiecewiseHerringbone(domain, mu, p), domain.bounding_box(), h);
}

HerringboneReport inspect(const PiecewiseHerringbone& field, const Domain& domain, double h, int stride) {
    if (!(h > 0.0) || stride < 1) fail(ErrorKind::parameter, "inspect needs h > 0 and stride >= 1");
    const Box box = domain.bounding_box();
    const double step = h * stride;
    const int nx = static_cast<int>(std::floor(box.width() / step));
    const int ny = static_cast<int>(std::floor(box.height() / step));
    struct Row {
        int samples = 0, bulk = 0, internal = 0, external = 0;
        double strain = 0, v = 0, gv = 0, w = 0, gw = 0, hw = 0, tr = 0;
    };
    std::vector<Row> rows(ny);
    const HerringboneParams& p = field.params();
    const double reach = std::sqrt(2.0) * h;
    parallel_for(ny, [&](std::size_t jj) {
        Row r;
        for (int i = 0; i < nx; ++i) {
            const Point2 x{box.lo.x + (i + 0.5) * step, box.lo.y + (jj + 0.5) * step};
            if (!domain.contains(x)) continue;
            ++r.samples;
            const FieldValue f = field.at(x);
            const Grad2 gu = source_grad_u(field, x, h);
            const Vec2 gw = source_grad_w(field, x, h);
            const Sym2 hw = source_hess_w(field, x, h);
            r.v = std::max(r.v, norm(f.u));
            r.gv = std::max(r.gv, gu.frobenius());
            r.w = std::max(r.w, std::abs(f.w));
            r.gw = std::max(r.gw, norm(gw));
            r.hw = std::max(r.hw, frobenius(hw));
            const auto [ci, cj] = field.locate(x);
            const Herringbone& hb = field.piece(ci, cj);
            r.tr = std::max(r.tr, hb.target().trace());
            const double dj = hb.jump_distance(x), de = field.edge_distance(x);
            r.internal += dj < p.delta_int;
            r.external += de < p.delta_ext;
            // the whole stencil must see bulk values
            if (dj >= p.delta_int + reach && de >= p.delta_ext + reach) {
                ++r.bulk;
                const Sym2 e = gu.sym() + 0.5 * outer(gw) - 0.5 * hb.target().mu;
                r.strain = std::max(r.strain, frobenius(e));
            }
        }
        rows[jj] = r;
    });
    HerringboneReport rep;
    rep.h = h;
    double tr = 0.0;
    int internal = 0, external = 0;
    for (const Row& r : rows) {
        rep.samples += r.samples;
        rep.bulk_samples += r.bulk;
        internal += r.internal;
        external += r.external;
        rep.bulk_strain_max = std::max(rep.bulk_strain_max, r.strain);
        rep.sup_v = std::max(rep.sup_v, r.v);
        rep.sup_grad_v = std::max(rep.sup_grad_v, r.gv);
        rep.sup_w = std::max(rep.sup_w, r.w);
        rep.sup_grad_w = std::max(rep.sup_grad_w, r.gw);
        rep.sup_hess_w = std::max(rep.sup_hess_w, r.hw);
        tr = std::max(tr, r.tr);
    }
    if (rep.samples > 0) {
        rep.internal_wall_fraction = double(internal) / rep.samples;
        rep.external_wall_fraction = double(external) / rep.samples;
    }
    if (tr > 0.0) {
        const double st = std::sqrt(tr);
        rep.c_v = rep.sup_v / (tr * std::pow(p.l_wr, 0.6));
        rep.c_grad_v = rep.sup_grad_v / tr;
        rep.c_w = rep.sup_w / (st * p.l_wr);
        rep.c_grad_w = rep.sup_grad_w / st;
        rep.c_hess_w = rep.sup_hess_w * p.l_wr / st;
    }
    return rep;
}

}  // namespace wrinkle
