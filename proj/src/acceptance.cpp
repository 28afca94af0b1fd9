#include "wrinkle/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <random>

#include "wrinkle/airy.hpp"
#include "wrinkle/characteristics.hpp"
#include "wrinkle/energy.hpp"
#include "wrinkle/error.hpp"
#include "wrinkle/herringbone.hpp"
#include "wrinkle/render.hpp"

namespace wrinkle {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

CriterionResult make(int id, std::string name) {
    CriterionResult r;
    r.id = id;
    r.name = std::move(name);
    return r;
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// ---------------------------------------------------------------- phi oracles
// Written independently of the airy module, straight from the shape geometry.

double ellipse_oracle(double a, double b, Point2 x) { return 0.5 * (b * b + (1.0 - b * b / (a * a)) * x.x * x.x); }

// half disc of radius a resting on the line x2 = a, arc on top, polar angle about the origin
double half_disc_oracle(double a, Point2 x) {
    const double r = norm(x), s = x.y / r;
    const double p = a / s, q = 2.0 * a * s;
    return 0.5 * (p + q) * r - 0.5 * p * q;
}

double rectangle_oracle(double a, double b, Point2 x) {
    const double x1 = std::abs(x.x), x2 = std::abs(x.y);
    auto f = [](Point2 y) { return 0.5 * norm2(y); };
    if (x1 <= a - b) return 0.5 * (x1 * x1 + b * b);
    if (x1 + x2 >= a) {
        // chord along (1, -1) from the top side to the right side
        const Point2 p{x1 - (b - x2), b}, q{a, x2 - (a - x1)};
        const double L = norm(q - p);
        const double t = L > 0.0 ? norm(Point2{x1, x2} - p) / L : 0.0;
        return f(p) + t * (f(q) - f(p));
    }
    // triangle (a-b, b), (a, 0), (a-b, -b)
    const Point2 A{a - b, b}, B{a, 0.0}, C{a - b, -b};
    const double det = (B.x - A.x) * (C.y - A.y) - (C.x - A.x) * (B.y - A.y);
    const double lb = ((x1 - A.x) * (C.y - A.y) - (C.x - A.x) * (x2 - A.y)) / det;
    const double lc = ((B.x - A.x) * (x2 - A.y) - (x1 - A.x) * (B.y - A.y)) / det;
    return (1.0 - lb - lc) * f(A) + lb * f(B) + lc * f(C);
}

struct TriangleOracle {
    Point2 incenter{};
    double r = 0.0;
    Point2 a[3];       // vertices relative to the incenter
    double alpha[3]{};  // interior angles
    double cut[3]{};    // contact point . a_hat

    explicit TriangleOracle(const std::vector<Point2>& v) {
        double len[3];
        for (int i = 0; i < 3; ++i) len[i] = norm(v[(i + 1) % 3] - v[(i + 2) % 3]);  // opposite side
        const double per = len[0] + len[1] + len[2];
        incenter = (len[0] * v[0] + len[1] * v[1] + len[2] * v[2]) / per;
        const double s = 0.5 * per;
        const double area = std::abs(cross(v[1] - v[0], v[2] - v[0])) / 2.0;
        r = area / s;
        for (int i = 0; i < 3; ++i) {
            a[i] = v[i] - incenter;
            const Vec2 e1 = v[(i + 1) % 3] - v[i], e2 = v[(i + 2) % 3] - v[i];
            alpha[i] = std::acos(dot(e1, e2) / (norm(e1) * norm(e2)));
            // contact point on side i -> i+1
            const Vec2 d = e1 / norm(e1);
            const Point2 c = v[i] + dot(incenter - v[i], d) * d - incenter;
            cut[i] = dot(c, a[i] / norm(a[i]));
        }
    }

    // in absolute coordinates: |y|^2/2 = |y - c|^2/2 + c . (y - c) + |c|^2/2, and the
    // affine part passes through the envelope
    double operator()(Point2 x) const {
        const Vec2 y = x - incenter;
        return centred(y) + dot(incenter, y) + 0.5 * norm2(incenter);
    }

    double centred(Vec2 y) const {
        for (int i = 0; i < 3; ++i) {
            const double an = norm(a[i]);
            const double s = dot(y, a[i] / an);
            if (s > cut[i]) {
                const double t = std::tan(0.5 * alpha[i]);
                return 0.5 * (s * s + t * t * (an - s) * (an - s));
            }
        }
        return 0.5 * r * r;
    }
};

std::vector<Point2> random_interior(const Domain& d, int n, std::mt19937_64& rng) {
    const Box bb = d.bounding_box();
    std::uniform_real_distribution<double> ux(bb.lo.x, bb.hi.x), uy(bb.lo.y, bb.hi.y);
    std::vector<Point2> out;
    while (static_cast<int>(out.size()) < n) {
        const Point2 x{ux(rng), uy(rng)};
        if (d.contains(x) && d.boundary_distance(x) > 1e-9) out.push_back(x);
    }
    return out;
}

// ---------------------------------------------------------------- shooting oracle
// g = rho lambda solves g'' = -2 rho K, g(0) = 0; the slope is fixed by g(L) = 0.
std::vector<double> shoot(double L, const LineFunction& rho, const LineFunction& K, int steps) {
    auto run = [&](double slope) {
        std::vector<double> g(steps + 1);
        double y = 0.0, v = slope;
        const double h = L / steps;
        g[0] = 0.0;
        auto acc = [&](double t) { return -2.0 * rho(t) * K(t); };
        for (int i = 0; i < steps; ++i) {
            const double t = i * h;
            const double k1y = v, k1v = acc(t);
            const double k2y = v + 0.5 * h * k1v, k2v = acc(t + 0.5 * h);
            const double k3y = v + 0.5 * h * k2v, k3v = acc(t + 0.5 * h);
            const double k4y = v + h * k3v, k4v = acc(t + h);
            y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
            v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
            g[i + 1] = y;
        }
        return g;
    };
    const auto g0 = run(0.0), g1 = run(1.0);
    const double s = -g0.back() / (g1.back() - g0.back());
    std::vector<double> lam(steps + 1);
    for (int i = 0; i <= steps; ++i) {
        const double t = L * i / steps;
        lam[i] = (g0[i] + s * (g1[i] - g0[i])) / rho(t);
    }
    return lam;
}

double max_grid_error(const DefectField& df, const std::function<double(Point2)>& exact) {
    const MaskedGrid& g = df.grid();
    double e = 0.0;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            const double v = df.lambda_grid()[g.index(i, j)];
            if (std::isfinite(v)) e = std::max(e, std::abs(v - exact(g.center(i, j))));
        }
    return e;
}

// ---------------------------------------------------------------- duality cases

struct DualCase {
    std::string name;
    Domain domain;
    ShellProfile shell;
    double target;
};

std::vector<DualCase> dual_cases() {
    const double a = 2.0, b = 1.0, R = 1.0;
    return {
        // half the integral of b^2 (1 - x1^2/a^2) - x2^2 over the ellipse
        {"ellipse+", Domain::ellipse(a, b), ShellProfile::constant(1.0), pi * a * b * b * b / 4.0},
        // half the integral of R^2 - r^2 over the disc
        {"disc+", Domain::disc(R), ShellProfile::constant(1.0), pi * std::pow(R, 4) / 4.0},
        // half the integral of r^2 / 3
        {"disc-", Domain::disc(R), ShellProfile::constant(-1.0), pi * std::pow(R, 4) / 12.0},
        // half the integral of d^2 over the rectangle: four trapezoids
        {"rectangle-", Domain::rectangle(a, b), ShellProfile::constant(-1.0),
         2.0 * (a * b * b * b / 3.0 - b * b * b * b / 6.0)},
    };
}

struct DualRun {
    double primal = 0.0, dual = 0.0, gap = 0.0, residual = 0.0, k_l1 = 0.0;
};

class Cache {
public:
    const DualRun& get(const DualCase& c, int n, const UDecomposition& u = {}) {
        const std::string key = c.name + "/" + std::to_string(n) + "/" + std::to_string(u.angle);
        auto it = runs_.find(key);
        if (it != runs_.end()) return it->second;
        DefectOptions o;
        o.grid = {n, n};
        o.u = u;
        const DefectField df = defect_field(c.domain, c.shell, o);
        const AiryField airy = solve_dual(c.domain, c.shell);
        DualRun r;
        r.primal = df.primal();
        r.dual = dual_value(c.domain, c.shell, airy, o.grid);
        r.gap = std::abs(r.primal - r.dual) / std::max(std::abs(r.primal), std::abs(r.dual));
        const ResidualReport rr = curlcurl_residual(df, c.shell, 8);
        r.residual = rr.max_residual;
        r.k_l1 = rr.k_l1;
        return runs_.emplace(key, r).first->second;
    }

private:
    std::map<std::string, DualRun> runs_;
};

// ---------------------------------------------------------------- criteria

CriterionResult c1_phi(const AcceptanceOptions& opts) {
    CriterionResult r = make(1, "closed-form phi+");
    std::mt19937_64 rng(opts.seed);
    const std::vector<Point2> tri{{0.0, 0.0}, {2.0, 0.0}, {0.7, 1.5}};
    const TriangleOracle tri_oracle(tri);
    struct Case {
        std::string name;
        Domain d;
        std::function<double(Point2)> oracle;
    };
    const std::vector<Case> cases{
        {"ellipse", Domain::ellipse(2.0, 1.0), [](Point2 x) { return ellipse_oracle(2.0, 1.0, x); }},
        {"disc", Domain::disc(1.5), [](Point2) { return 0.5 * 1.5 * 1.5; }},
        {"half-disc", Domain::half_disc(1.0, {0.0, 1.0}, pi / 2), [](Point2 x) { return half_disc_oracle(1.0, x); }},
        {"rectangle", Domain::rectangle(2.0, 1.0), [](Point2 x) { return rectangle_oracle(2.0, 1.0, x); }},
        {"triangle", Domain::convex_polygon(tri), [&](Point2 x) { return tri_oracle(x); }},
    };
    bool ok = true;
    std::string detail;
    for (const Case& c : cases) {
        double e = 0.0;
        for (const Point2& x : random_interior(c.d, 10000, rng)) e = std::max(e, std::abs(phi_plus(c.d, x) - c.oracle(x)));
        ok = ok && e < 1e-9;
        detail += c.name + " " + sci(e) + ", ";
    }
    const Domain ell = Domain::ellipse(2.0, 1.0);
    const ConvexRoof roof(ell, 512);
    double eg = 0.0;
    for (const Point2& x : random_interior(ell, 2000, rng)) eg = std::max(eg, std::abs(roof(x) - ellipse_oracle(2, 1, x)));
    ok = ok && eg < 5e-4;
    r.pass = ok;
    r.detail = detail + "generic n=512 " + sci(eg) + " (tol 1e-9 / 5e-4)";
    return r;
}

CriterionResult c2_characteristics() {
    CriterionResult r = make(2, "characteristic ODE exactness");
    DefectOptions o;
    o.grid = {512, 512};
    const DefectField ell = defect_field(Domain::ellipse(2.0, 1.0), ShellProfile::constant(1.0), o);
    const double e_ell = max_grid_error(ell, [](Point2 x) { return 1.0 - x.x * x.x / 4.0 - x.y * x.y; });
    const DefectField disc = defect_field(Domain::disc(1.0), ShellProfile::constant(-1.0), o);
    const double e_disc = max_grid_error(disc, [](Point2 x) { return norm2(x) / 3.0; });

    // ray at theta = pi/2 of the half disc, r from 1 to 2, rho = r
    StableLine ray;
    ray.start = {0.0, 1.0};
    ray.end = {0.0, 2.0};
    ray.eta = {-1.0, 0.0};
    const LineFunction rho = [](double t) { return 1.0 + t; };
    const LineFunction one = [](double) { return 1.0; };
    const LineSolution sol = solve_bvp(ray, rho, one, 2000);
    const double e_bvp = std::abs(sol.lambda_at(0.5) - 0.25);
    const std::vector<double> shot = shoot(1.0, rho, one, 2000);
    const double e_shoot = std::abs(shot[1000] - 0.25);
    double e_cross = 0.0;
    for (int i = 0; i <= 20; ++i) e_cross = std::max(e_cross, std::abs(sol.lambda_at(i / 20.0) - shot[i * 100]));

    DefectOptions oh;
    oh.grid = {256, 256};
    const DefectField half = defect_field(Domain::half_disc(1.0, {0.0, 1.0}, pi / 2), ShellProfile::constant(1.0), oh);
    const auto lp = half.lambda_at({0.0, 1.5});
    const double e_pipe = lp ? std::abs(*lp - 0.25) : inf;

    // ellipse chords against the shooting oracle
    double e_chord = 0.0;
    for (double x1 : {0.0, 0.7, 1.4}) {
        const double h = std::sqrt(1.0 - x1 * x1 / 4.0);
        const std::vector<double> lam = shoot(2.0 * h, [](double) { return 1.0; }, one, 1000);
        for (int i = 1; i < 1000; i += 37) {
            const auto v = ell.lambda_at({x1, -h + 2.0 * h * i / 1000.0});
            if (v) e_chord = std::max(e_chord, std::abs(*v - lam[i]));
        }
    }
    r.pass = e_ell < 1e-4 && e_disc < 1e-4 && e_bvp < 1e-4 && e_pipe < 1e-4 && e_shoot < 1e-4 && e_cross < 1e-4 &&
             e_chord < 1e-4;
    r.detail = "ellipse+ " + sci(e_ell) + ", disc- " + sci(e_disc) + ", half-disc bvp " + sci(e_bvp) + " pipeline " +
               sci(e_pipe) + ", shooting vs closed form " + sci(e_shoot) + " vs bvp " + sci(e_cross) +
               ", ellipse chords vs shooting " + sci(e_chord) + " (tol 1e-4)";
    return r;
}

CriterionResult c3_duality(Cache& cache) {
    CriterionResult r = make(3, "strong duality");
    bool ok = true;
    std::string d;
    for (const DualCase& c : dual_cases()) {
        const DualRun& a = cache.get(c, 256);
        const DualRun& b = cache.get(c, 512);
        const double t256 = std::abs(a.primal - c.target) / c.target, t512 = std::abs(b.primal - c.target) / c.target;
        ok = ok && a.gap < 1e-2 && b.gap < 3e-3 && t256 < 1e-2 && t512 < 3e-3;
        d += c.name + " gap " + sci(a.gap) + "/" + sci(b.gap) + " vs target " + sci(t256) + "/" + sci(t512) + ", ";
    }
    r.pass = ok;
    r.detail = d + "(256/512, tol 1e-2/3e-3)";
    return r;
}

// Residual passes at 256 and either shrinks with order >= 1.5 or already sits
// at the quadrature noise floor.
bool residual_ok(const DualRun& a, const DualRun& b, double* order) {
    *order = (a.residual > 0.0 && b.residual > 0.0) ? std::log2(a.residual / b.residual) : inf;
    const bool floor = b.residual < 1e-7 * b.k_l1;
    return a.residual < 1e-3 * a.k_l1 && (*order >= 1.5 || floor);
}

CriterionResult c4_residual(Cache& cache) {
    CriterionResult r = make(4, "constraint residual");
    bool ok = true;
    std::string d;
    for (const DualCase& c : dual_cases()) {
        const DualRun& a = cache.get(c, 256);
        const DualRun& b = cache.get(c, 512);
        double order = 0.0;
        ok = ok && residual_ok(a, b, &order);
        d += c.name + " " + sci(a.residual / a.k_l1) + "->" + sci(b.residual / b.k_l1) + " order " + sci(order) + ", ";
    }
    r.pass = ok;
    r.detail = d + "(relative to |K|_1; 64 bumps; floor 1e-7)";
    return r;
}

CriterionResult c5_nonuniqueness(Cache& cache) {
    CriterionResult r = make(5, "non-uniqueness on the positive disc");
    const DualCase c = dual_cases()[1];
    UDecomposition u0, u1;
    u1.angle = pi / 4;
    bool ok = true;
    for (const UDecomposition* u : {&u0, &u1}) {
        const DualRun& a = cache.get(c, 256, *u);
        const DualRun& b = cache.get(c, 512, *u);
        double order = 0.0;
        ok = ok && a.gap < 1e-2 && b.gap < 3e-3 && residual_ok(a, b, &order);
    }
    DefectOptions o;
    o.grid = {256, 256};
    o.u = u0;
    const DefectField f0 = defect_field(c.domain, c.shell, o);
    o.u = u1;
    const DefectField f1 = defect_field(c.domain, c.shell, o);
    // Parallel chords give lambda = R^2 - r^2 at every angle; the decompositions
    // differ through eta, so the fields are compared as mu = lambda eta (x) eta.
    const MaskedGrid& g = f0.grid();
    double diff = 0.0, dlam = 0.0;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            const Point2 x = g.center(i, j);
            const auto m0 = f0.mu_at(x), m1 = f1.mu_at(x);
            if (m0 && m1) diff = std::max(diff, frobenius(*m0 - *m1));
            const double a = f0.lambda_grid()[g.index(i, j)], b = f1.lambda_grid()[g.index(i, j)];
            if (std::isfinite(a) && std::isfinite(b)) dlam = std::max(dlam, std::abs(a - b));
        }
    const double rel = std::abs(f0.primal() - f1.primal()) / std::max(f0.primal(), f1.primal());
    r.pass = ok && rel < 1e-3 && diff > 0.1;
    r.detail = "criteria 3-4 " + std::string(ok ? "pass" : "fail") + " for both, primal " + sci(f0.primal()) + " vs " +
               sci(f1.primal()) + " (rel " + sci(rel) + "), max |mu diff| " + sci(diff) + ", max |lambda diff| " + sci(dlam);
    return r;
}

CriterionResult c6_herringbone() {
    CriterionResult r = make(6, "herringbone construction");
    const double b = 1e-8, k = 1.0;
    const Domain square = Domain::convex_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    const TargetFunction mu = [](Point2) { return std::optional<Sym2>(identity2()); };
    const HerringboneParams p = optimal_params(b, k, TargetDefect::from(identity2()));
    const PiecewiseHerringbone field(square, mu, p);
    const double h = p.l_wr / 32.0;
    const HerringboneReport rep = inspect(field, square, h);
    const EnergyBreakdown e = energy_against_target(field, square, mu, {b, k, 0.0}, h);

    using C = HerringboneConstants;
    const bool bounds = rep.c_v <= C::v && rep.c_grad_v <= C::grad_v && rep.c_w <= C::w && rep.c_grad_w <= C::grad_w &&
                        rep.c_hess_w <= C::hess_w;
    const bool i = rep.bulk_strain_max < 10.0 * h;
    const double wr = (e.bending + e.substrate) / (2.0 * std::sqrt(b * k));
    const bool ii = wr >= 0.8 && wr <= 1.2;
    const double scale = std::pow(b / k, 0.1);
    const bool iii = e.stretching < 0.3 * scale;
    r.pass = bounds && i && ii && iii;
    r.detail = "(i) bulk strain " + sci(rep.bulk_strain_max) + " < " + sci(10 * h) + (i ? " ok" : " FAIL") +
               "; (ii) wrinkling/2sqrt(bk) " + sci(wr) + (ii ? " ok" : " FAIL") + "; (iii) stretching " +
               sci(e.stretching) + " vs 0.3*(b/k)^0.1 = " + sci(0.3 * scale) + (iii ? " ok" : " FAIL") +
               "; walls int/ext " + sci(rep.internal_wall_fraction) + "/" + sci(rep.external_wall_fraction) +
               "; constants v " + sci(rep.c_v) + " dv " + sci(rep.c_grad_v) + " w " + sci(rep.c_w) + " dw " +
               sci(rep.c_grad_w) + " ddw " + sci(rep.c_hess_w) + (bounds ? " ok" : " FAIL");
    return r;
}

CriterionResult c7_scaling(const AcceptanceOptions& opts) {
    CriterionResult r = make(7, "scaling fit");
    const std::vector<EnergyParams> seq{{1e-6, 1, 0}, {1e-8, 1, 0}, {1e-10, 1, 0}};
    const Domain d = Domain::ellipse(2.0, 1.0);
    const ShellProfile shell = ShellProfile::constant(1.0);
    std::string regime;
    try {
        check_regime(seq);
    } catch (const Error& e) {
        regime = e.what();
    }
    bool fit_ok = false;
    std::string fit;
    if (regime.empty() || opts.diagnostics) {
        ScalingOptions so;
        so.enforce_regime = false;
        const ScalingReport rep = scaling_study(d, shell, seq, so);
        const double rel = std::abs(rep.c1 - pi / 2) / (pi / 2);
        fit_ok = rel < 0.2 && rep.residuals_decreasing;
        fit = "C1 " + sci(rep.c1) + " (rel to pi/2 " + sci(rel) + "), residuals " +
              (rep.residuals_decreasing ? "decreasing" : "not decreasing") + ", ratios";
        for (const ScalingPoint& pt : rep.points) fit += " " + sci(pt.ratio);
        fit += ", stretching";
        for (const ScalingPoint& pt : rep.points) fit += " " + sci(pt.energy.stretching);
    }
    r.pass = regime.empty() && fit_ok;
    r.detail = (regime.empty() ? std::string("regime ok") : regime) +
               (fit.empty() ? "" : "; sweep " + fit);
    return r;
}

// window on [0, 1] rising over [0, delta] and falling over [1 - delta, 1]
struct Window {
    double delta;
    static double S(double u) { return u <= 0 ? 0 : u >= 1 ? 1 : u * u * u * (10 - 15 * u + 6 * u * u); }
    static double S1(double u) { return u <= 0 || u >= 1 ? 0 : 30 * u * u * (1 - u) * (1 - u); }
    static double S2(double u) { return u <= 0 || u >= 1 ? 0 : 60 * u * (1 - u) * (1 - 2 * u); }
    double g(double t) const { return S(t / delta) * S((1 - t) / delta); }
    double g1(double t) const {
        return S1(t / delta) / delta * S((1 - t) / delta) - S(t / delta) * S1((1 - t) / delta) / delta;
    }
    double g2(double t) const {
        const double a = t / delta, b = (1 - t) / delta, d2 = delta * delta;
        return S2(a) / d2 * S(b) - 2 * S1(a) * S1(b) / d2 + S(a) * S2(b) / d2;
    }
};

CriterionResult c8_interpolation(const AcceptanceOptions& opts) {
    CriterionResult r = make(8, "interpolation inequality");
    const double b = 1e-4, k = 1.0, l = std::pow(b / k, 0.25);
    const Box box{{0, 0}, {1, 1}};
    const Window win{0.2};
    ScalarField chi{
        [=](Point2 x) { return win.g(x.x) * win.g(x.y); },
        [=](Point2 x) { return Vec2{win.g1(x.x) * win.g(x.y), win.g(x.x) * win.g1(x.y)}; },
        [=](Point2 x) {
            return Sym2{win.g2(x.x) * win.g(x.y), win.g1(x.x) * win.g1(x.y), win.g(x.x) * win.g2(x.y)};
        },
    };
    struct Mode {
        double amp;
        Vec2 kv;
        double phase;
    };
    auto field = [](std::vector<Mode> modes) {
        return ScalarField{
            [=](Point2 x) {
                double s = 0;
                for (const Mode& m : modes) s += m.amp * std::cos(dot(m.kv, x) + m.phase);
                return s;
            },
            [=](Point2 x) {
                Vec2 g{};
                for (const Mode& m : modes) g = g - (m.amp * std::sin(dot(m.kv, x) + m.phase)) * m.kv;
                return g;
            },
            [=](Point2 x) {
                Sym2 h{};
                for (const Mode& m : modes) {
                    const double c = -m.amp * std::cos(dot(m.kv, x) + m.phase);
                    h.xx += c * m.kv.x * m.kv.x;
                    h.xy += c * m.kv.x * m.kv.y;
                    h.yy += c * m.kv.y * m.kv.y;
                }
                return h;
            },
        };
    };
    std::mt19937_64 rng(opts.seed + 8);
    std::normal_distribution<double> amp(0.0, 1.0);
    std::uniform_real_distribution<double> mag(0.25 / l, 4.0 / l), ang(0.0, 2 * pi);
    double worst = inf;
    int failures = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Mode> modes;
        for (int m = 0; m < 8; ++m) {
            const double km = mag(rng), a = ang(rng);
            modes.push_back({amp(rng), {km * std::cos(a), km * std::sin(a)}, ang(rng)});
        }
        const InterpolationMargin m = interpolation_check(field(modes), chi, box, 512, b, k);
        const double rel = m.margin / m.scale;
        worst = std::min(worst, rel);
        if (m.margin < -1e-6 * m.scale) ++failures;
    }
    const InterpolationMargin s =
        interpolation_check(field({{l * std::sqrt(2.0), {1.0 / l, 0.0}, 0.0}}), chi, box, 512, b, k);
    const bool sin_ok = s.margin >= -1e-6 * s.scale;
    r.pass = failures == 0 && sin_ok;
    r.detail = "100 random fields: " + std::to_string(failures) + " below tolerance, worst margin/scale " + sci(worst) +
               "; sinusoid margin/scale " + sci(s.margin / s.scale) + ", square term/scale " +
               sci(s.square_term / s.scale);
    return r;
}

CriterionResult c9_geometry(const AcceptanceOptions& opts) {
    CriterionResult r = make(9, "geometry invariants");
    const std::vector<std::pair<std::string, Domain>> shapes{
        {"disc", Domain::disc(1.0)},
        {"ellipse", Domain::ellipse(2.0, 1.0)},
        {"half-disc", Domain::half_disc(1.0)},
        {"rectangle", Domain::rectangle(2.0, 1.0)},
        {"triangle", Domain::convex_polygon({{0.0, 0.0}, {2.0, 0.0}, {0.7, 1.5}})},
        {"pentagon", Domain::convex_polygon({{0.0, 0.0}, {2.0, 0.0}, {2.4, 1.2}, {1.0, 2.0}, {-0.4, 1.1}})},
    };
    const int n = 512;
    bool ok = true;
    std::string d;
    std::mt19937_64 rng(opts.seed + 9);
    for (const auto& [name, dom] : shapes) {
        const Box bb = dom.bounding_box();
        const double hx = bb.width() / n, hy = bb.height() / n;
        const double scale = dom.diameter();
        std::vector<double> dist(static_cast<std::size_t>(n) * n, std::nan(""));
        auto at = [&](int i, int j) { return Point2{bb.lo.x + (i + 0.5) * hx, bb.lo.y + (j + 0.5) * hy}; };
        parallel_for(n, [&](std::size_t j) {
            for (int i = 0; i < n; ++i) {
                const Point2 x = at(i, static_cast<int>(j));
                if (dom.contains(x)) dist[j * n + i] = dom.boundary_distance(x);
            }
        });
        auto D = [&](int i, int j) { return dist[static_cast<std::size_t>(j) * n + i]; };
        int lip = 0, conc = 0;
        const double tol = 1e-12 * scale;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                if (std::isnan(D(i, j))) continue;
                if (i + 1 < n && !std::isnan(D(i + 1, j)) && std::abs(D(i + 1, j) - D(i, j)) > hx + tol) ++lip;
                if (j + 1 < n && !std::isnan(D(i, j + 1)) && std::abs(D(i, j + 1) - D(i, j)) > hy + tol) ++lip;
                if (i + 1 < n && j + 1 < n && !std::isnan(D(i + 1, j + 1)) &&
                    std::abs(D(i + 1, j + 1) - D(i, j)) > std::hypot(hx, hy) + tol)
                    ++lip;
                if (i > 0 && i + 1 < n && !std::isnan(D(i - 1, j)) && !std::isnan(D(i + 1, j)) &&
                    D(i, j) < 0.5 * (D(i - 1, j) + D(i + 1, j)) - tol)
                    ++conc;
                if (j > 0 && j + 1 < n && !std::isnan(D(i, j - 1)) && !std::isnan(D(i, j + 1)) &&
                    D(i, j) < 0.5 * (D(i, j - 1) + D(i, j + 1)) - tol)
                    ++conc;
            }
        // long random pairs
        const std::vector<Point2> pa = random_interior(dom, 4000, rng), pb = random_interior(dom, 4000, rng);
        for (std::size_t m = 0; m < pa.size(); ++m) {
            const double da = dom.boundary_distance(pa[m]), db = dom.boundary_distance(pb[m]);
            if (std::abs(da - db) > norm(pa[m] - pb[m]) + tol) ++lip;
            if (dom.boundary_distance(0.5 * (pa[m] + pb[m])) < 0.5 * (da + db) - tol) ++conc;
        }
        // multiplicity: >= 2 nearest points on the medial axis, exactly 1 away from it
        const MedialAxis& ma = dom.medial_axis();
        int on = 0, on_bad = 0, off = 0, off_bad = 0;
        for (const Point2& x : ma.sample(scale / n)) {
            ++on;
            if (dom.nearest_boundary_points(x, 1e-9 * scale).size() < 2) ++on_bad;
        }
        const double gap = 4.0 * std::hypot(hx, hy);
        for (int j = 0; j < n; j += 2)
            for (int i = 0; i < n; i += 2) {
                if (std::isnan(D(i, j)) || D(i, j) < gap) continue;
                const Point2 x = at(i, j);
                if (ma.distance(x) < gap) continue;
                ++off;
                if (dom.nearest_boundary_points(x, 1e-9 * scale).size() != 1) ++off_bad;
            }
        const bool shape_ok = lip == 0 && conc == 0 && on_bad == 0 && off_bad == 0 && on > 0;
        ok = ok && shape_ok;
        d += name + (shape_ok ? " ok" : " FAIL") + " (lip " + std::to_string(lip) + ", conc " + std::to_string(conc) +
             ", medial " + std::to_string(on - on_bad) + "/" + std::to_string(on) + ", off " +
             std::to_string(off - off_bad) + "/" + std::to_string(off) + "), ";
    }
    r.pass = ok;
    r.detail = d.substr(0, d.size() - 2);
    return r;
}

}  // namespace

std::string format_result(const CriterionResult& r) {
    char head[96];
    std::snprintf(head, sizeof head, "[%s] criterion %d %-38s %7.1fs  ", r.pass ? "PASS" : "FAIL", r.id,
                  r.name.c_str(), r.seconds);
    return head + r.detail;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result) {
    Cache cache;
    std::vector<CriterionResult> out;
    for (int id = 1; id <= 9; ++id) {
        if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), id) == opts.only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            switch (id) {
                case 1: r = c1_phi(opts); break;
                case 2: r = c2_characteristics(); break;
                case 3: r = c3_duality(cache); break;
                case 4: r = c4_residual(cache); break;
                case 5: r = c5_nonuniqueness(cache); break;
                case 6: r = c6_herringbone(); break;
                case 7: r = c7_scaling(opts); break;
                case 8: r = c8_interpolation(opts); break;
                default: r = c9_geometry(opts); break;
            }
        } catch (const Error& e) {
            r.id = id;
            r.name = "criterion " + std::to_string(id);
            r.pass = false;
            r.detail = e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (on_result) on_result(r);
        out.push_back(r);
    }
    return out;
}

}  // namespace wrinkle
