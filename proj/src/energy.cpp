#include "wrinkle/energy.hpp"

#include <cmath>
#include <sstream>

#include "wrinkle/error.hpp"
#include "wrinkle/parallel.hpp"

namespace wrinkle {

void EnergyParams::validate() const {
    if (!(b > 0.0) || !(k > 0.0) || !std::isfinite(b) || !std::isfinite(k))
        fail(ErrorKind::parameter, "b and k must be positive");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) fail(ErrorKind::parameter, "gamma must be nonnegative");
}

StrainReference StrainReference::from_shell(const ShellProfile& shell) {
    if (!shell.has_height()) {
        if (shell.sign() != CurvatureSign::zero || shell.kind() == ShellProfile::Kind::sampled)
            fail(ErrorKind::data, "energy needs the shell height gradient; " + shell.describe() + " has none");
        return {[](Point2) { return ReferenceValue{}; }};
    }
    return {[shell](Point2 x) {
        const Vec2 g = shell.height_gradient(x);
        return ReferenceValue{outer(g), shell.height_hessian(x), 0.5 * norm2(g)};
    }};
}

StrainReference StrainReference::from_defect(TargetFunction mu) {
    return {[mu = std::move(mu)](Point2 x) {
        ReferenceValue r;
        if (auto m = mu(x)) {
            r.target = *m;
            r.surface_density = 0.5 * trace(*m);
        }
        return r;
    }};
}

namespace {

struct Node {
    Point2 x;
    double weight;
    double w;
    Grad2 gu;
    Vec2 gw;
    Sym2 hw;
};

struct Sums {
    double stretching = 0, bending = 0, substrate = 0, surface = 0, shifted_stretch = 0, grad_w = 0, area = 0;
    long long nodes = 0;

    void add(const Sums& o) {
        stretching += o.stretching;
        bending += o.bending;
        substrate += o.substrate;
        surface += o.surface;
        shifted_stretch += o.shifted_stretch;
        grad_w += o.grad_w;
        area += o.area;
        nodes += o.nodes;
    }
};

void accumulate(const Node& n, const StrainReference& ref, const EnergyParams& p, Sums& s) {
    const ReferenceValue r = ref.at(n.x);
    const Sym2 eps = n.gu.sym() + 0.5 * outer(n.gw) - 0.5 * r.target;
    const Sym2 db = n.hw - r.hessian;
    const Sym2 shifted = eps - p.gamma * identity2();
    const double wt = n.weight;
    s.stretching += wt * 0.5 * ddot(eps, eps);
    s.bending += wt * 0.5 * p.b * ddot(db, db);
    s.substrate += wt * 0.5 * p.k * n.w * n.w;
    s.surface += wt * r.surface_density;
    s.shifted_stretch += wt * 0.5 * ddot(shifted, shifted);
    s.grad_w += wt * norm2(n.gw);
    s.area += wt;
    ++s.nodes;
}

// fraction of the cell of side h centred at c inside the domain
double cell_weight(const Domain& d, Point2 c, double h) {
    const double r = 0.5 * h;
    const int in = d.contains({c.x - r, c.y - r}) + d.contains({c.x + r, c.y - r}) + d.contains({c.x - r, c.y + r}) +
                   d.contains({c.x + r, c.y + r});
    if (in == 4) return 1.0;
    if (in == 0 && !d.contains(c)) return 0.0;
    constexpr int sub = 4;
    int c_in = 0;
    for (int b = 0; b < sub; ++b)
        for (int a = 0; a < sub; ++a)
            c_in += d.contains({c.x - r + (a + 0.5) * h / sub, c.y - r + (b + 0.5) * h / sub});
    return double(c_in) / (sub * sub);
}

double boundary_flux(const Domain& d, const std::function<Vec2(Point2)>& u, double h) {
    double total = 0.0;
    for (const BoundaryPiece& piece : d.pieces()) {
        const double len = piece.length();
        const int n = std::max(8, static_cast<int>(std::ceil(len / h)));
        double s = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double t = piece.param_at_arclength(len * i / n);
            const double f = dot(u(piece.point(t)), piece.normal(t));
            s += (i == 0 || i == n) ? 0.5 * f : f;
        }
        total += s * len / n;
    }
    return total;
}

EnergyReport finish(const Sums& s, double cell, double flux, const EnergyParams& p, double h) {
    EnergyReport rep;
    EnergyBreakdown& e = rep.energy;
    e.stretching = s.stretching * cell;
    e.bending = s.bending * cell;
    e.substrate = s.substrate * cell;
    e.surface = p.gamma * (s.surface * cell - flux);
    e.total = e.stretching + e.bending + e.substrate + e.surface;
    rep.shifted = (s.shifted_stretch + 0.5 * p.gamma * s.grad_w) * cell + e.bending + e.substrate;
    rep.area = s.area * cell;
    rep.boundary_flux = flux;
    rep.h = h;
    rep.nodes = s.nodes;
    return rep;
}

void check_resolution(double scale, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) fail(ErrorKind::resolution, "grid spacing must be positive");
    if (scale > 0.0 && h > scale / 16.0 * (1.0 + 1e-12)) {
        std::ostringstream m;
        m << "grid spacing " << h << " does not resolve the finest scale " << scale << " (need h <= scale / 16)";
        fail(ErrorKind::resolution, m.str());
    }
}

}  // namespace

EnergyReport evaluate_energy(const FieldSource& field, const Domain& domain, const StrainReference& ref,
                             const EnergyParams& params, double h) {
    params.validate();
    check_resolution(field.finest_scale(), h);
    const Box box = domain.bounding_box();
    const int nx = std::max(1, static_cast<int>(std::ceil(box.width() / h - 1e-9)));
    const int ny = std::max(1, static_cast<int>(std::ceil(box.height() / h - 1e-9)));
    auto pos = [&](int i, int j) { return Point2{box.lo.x + (i + 0.5) * h, box.lo.y + (j + 0.5) * h}; };
    constexpr int band = 32;
    const int bands = (ny + band - 1) / band;
    std::vector<Sums> partial(bands);
    parallel_for(bands, [&](std::size_t bi) {
        const int j0 = static_cast<int>(bi) * band, j1 = std::min(ny, j0 + band);
        // weights and their nonzero index range for rows j0 - 2 .. j1 + 1
        const int r0 = j0 - 2, nr = j1 - j0 + 4;
        std::vector<std::vector<double>> weight(nr);
        std::vector<std::pair<int, int>> range(nr, {nx, -1});
        for (int r = 0; r < nr; ++r) {
            const int j = r0 + r;
            if (j < 0 || j >= ny) continue;
            auto& wr = weight[r];
            wr.assign(nx, 0.0);
            for (int i = 0; i < nx; ++i) {
                wr[i] = cell_weight(domain, pos(i, j), h);
                if (wr[i] > 0.0) {
                    range[r].first = std::min(range[r].first, i);
                    range[r].second = std::max(range[r].second, i);
                }
            }
        }
        // ring of sampled rows, index i + 1 for i in [-1, nx]
        std::vector<std::vector<FieldValue>> ring(3, std::vector<FieldValue>(nx + 2));
        auto sample = [&](int j, std::vector<FieldValue>& row) {
            int a = nx, b = -1;
            for (int d = -1; d <= 1; ++d) {
                const int r = j + d - r0;
                if (r < 0 || r >= nr) continue;
                a = std::min(a, range[r].first);
                b = std::max(b, range[r].second);
            }
            for (int i = std::max(-1, a - 1); i <= std::min(nx, b + 1); ++i) row[i + 1] = field.at(pos(i, j));
        };
        Sums s;
        sample(j0 - 1, ring[0]);
        sample(j0, ring[1]);
        for (int j = j0; j < j1; ++j) {
            std::vector<FieldValue>& lo = ring[(j - j0) % 3];
            std::vector<FieldValue>& mid = ring[(j - j0 + 1) % 3];
            std::vector<FieldValue>& hi = ring[(j - j0 + 2) % 3];
            sample(j + 1, hi);
            const auto& wr = weight[j - r0];
            const auto [a, b] = range[j - r0];
            for (int i = a; i <= b; ++i) {
                if (wr[i] <= 0.0) continue;
                const int c = i + 1;
                Node n;
                n.x = pos(i, j);
                n.weight = wr[i];
                n.w = mid[c].w;
                const Vec2 dx = (mid[c + 1].u - mid[c - 1].u) / (2.0 * h);
                const Vec2 dy = (hi[c].u - lo[c].u) / (2.0 * h);
                n.gu = {{dx.x, dy.x}, {dx.y, dy.y}};
                n.gw = {(mid[c + 1].w - mid[c - 1].w) / (2.0 * h), (hi[c].w - lo[c].w) / (2.0 * h)};
                const double h2 = h * h;
                n.hw = {(mid[c + 1].w - 2.0 * mid[c].w + mid[c - 1].w) / h2,
                        (hi[c + 1].w - hi[c - 1].w - lo[c + 1].w + lo[c - 1].w) / (4.0 * h2),
                        (hi[c].w - 2.0 * mid[c].w + lo[c].w) / h2};
                accumulate(n, ref, params, s);
            }
        }
        partial[bi] = s;
    });
    Sums total;
    for (const Sums& s : partial) total.add(s);
    const double flux = params.gamma > 0.0 ? boundary_flux(domain, [&](Point2 x) { return field.at(x).u; }, h) : 0.0;
    return finish(total, h * h, flux, params, h);
}

EnergyReport evaluate_energy(const DisplacementField& field, const Domain& domain, const StrainReference& ref,
                             const EnergyParams& params) {
    params.validate();
    const double h = field.h();
    std::vector<Sums> rows(field.ny());
    parallel_for(field.ny(), [&](std::size_t jj) {
        const int j = static_cast<int>(jj);
        Sums s;
        for (int i = 0; i < field.nx(); ++i) {
            Node n;
            n.x = field.node(i, j);
            n.weight = cell_weight(domain, n.x, h);
            if (n.weight <= 0.0) continue;
            n.w = field.w(i, j);
            n.gu = field.grad_u(i, j);
            n.gw = field.grad_w(i, j);
            n.hw = field.hess_w(i, j);
            accumulate(n, ref, params, s);
        }
        rows[jj] = s;
    });
    Sums total;
    for (const Sums& s : rows) total.add(s);
    const double flux = params.gamma > 0.0 ? boundary_flux(domain, [&](Point2 x) { return field.at(x).u; }, h) : 0.0;
    return finish(total, h * h, flux, params, h);
}

EnergyBreakdown energy(const DisplacementField& field, const Domain& domain, const ShellProfile& shell,
                       const EnergyParams& params) {
    return evaluate_energy(field, domain, StrainReference::from_shell(shell), params).energy;
}

EnergyBreakdown energy(const FieldSource& field, const Domain& domain, const ShellProfile& shell,
                       const EnergyParams& params, double h) {
    return evaluate_energy(field, domain, StrainReference::from_shell(shell), params, h).energy;
}

EnergyBreakdown energy_against_target(const FieldSource& field, const Domain& domain, const TargetFunction& mu,
                                      const EnergyParams& params, double h) {
    return evaluate_energy(field, domain, StrainReference::from_defect(mu), params, h).energy;
}

StrainField strain(const DisplacementField& field, const ShellProfile& shell) {
    const StrainReference ref = StrainReference::from_shell(shell);
    StrainField out;
    out.origin = field.origin();
    out.h = field.h();
    out.nx = field.nx();
    out.ny = field.ny();
    out.eps.resize(static_cast<std::size_t>(out.nx) * out.ny);
    parallel_for(out.ny, [&](std::size_t jj) {
        const int j = static_cast<int>(jj);
        for (int i = 0; i < out.nx; ++i)
            out.eps[jj * out.nx + i] =
                field.grad_u(i, j).sym() + 0.5 * outer(field.grad_w(i, j)) - 0.5 * ref.at(field.node(i, j)).target;
    });
    return out;
}

double duality_gap(const Domain& domain, const ShellProfile& shell, GridSpec grid, const DefectOptions& opts) {
    if (shell.sign() == CurvatureSign::zero) return 0.0;
    DefectOptions o = opts;
    o.grid = grid;
    const DefectField f = defect_field(domain, shell, o);
    const double p = primal_value(f);
    const double d = dual_value(domain, shell, f.airy(), grid);
    const double m = std::max(std::abs(p), std::abs(d));
    return m > 0.0 ? std::abs(p - d) / m : 0.0;
}

InterpolationMargin interpolation_check(const ScalarField& w, const ScalarField& chi, Box box, int n, double b,
                                        double k) {
    if (!(b > 0.0) || !(k > 0.0)) fail(ErrorKind::parameter, "b and k must be positive");
    if (n < 8) fail(ErrorKind::resolution, "interpolation check needs at least 8 x 8 cells");
    const double dx = box.width() / n, dy = box.height() / n;
    for (int i = 0; i <= 4 * n; ++i) {
        const double t = double(i) / (4 * n);
        for (Point2 x : {Point2{box.lo.x + t * box.width(), box.lo.y}, Point2{box.lo.x + t * box.width(), box.hi.y},
                         Point2{box.lo.x, box.lo.y + t * box.height()}, Point2{box.hi.x, box.lo.y + t * box.height()}})
            if (std::abs(chi.value(x)) > 1e-12) fail(ErrorKind::data, "cutoff does not vanish on the box boundary");
    }
    struct Acc {
        double hess = 0, w2 = 0, gw2 = 0, grad_chi = 0, sq_chi = 0, gchi = 0, hchi = 0;
        bool bad = false;
    };
    std::vector<Acc> rows(n);
    const double sb = std::sqrt(b), sk = std::sqrt(k);
    parallel_for(n, [&](std::size_t jj) {
        Acc a;
        for (int i = 0; i < n; ++i) {
            const Point2 x{box.lo.x + (i + 0.5) * dx, box.lo.y + (jj + 0.5) * dy};
            const double c = chi.value(x);
            if (c < -1e-12 || c > 1.0 + 1e-12 || !std::isfinite(c)) a.bad = true;
            const double wv = w.value(x);
            const Vec2 g = w.gradient(x);
            const Sym2 hs = w.hessian(x);
            a.hess += ddot(hs, hs);
            a.w2 += wv * wv;
            a.gw2 += norm2(g);
            a.grad_chi += norm2(g) * c;
            const double q = sb * trace(hs) + sk * wv;
            a.sq_chi += q * q * c;
            a.gchi = std::max(a.gchi, norm(chi.gradient(x)));
            a.hchi = std::max(a.hchi, frobenius(chi.hessian(x)));
        }
        rows[jj] = a;
    });
    Acc t;
    for (const Acc& a : rows) {
        if (a.bad) fail(ErrorKind::data, "cutoff leaves [0, 1]");
        t.hess += a.hess;
        t.w2 += a.w2;
        t.gw2 += a.gw2;
        t.grad_chi += a.grad_chi;
        t.sq_chi += a.sq_chi;
        t.gchi = std::max(t.gchi, a.gchi);
        t.hchi = std::max(t.hchi, a.hchi);
    }
    const double cell = dx * dy;
    InterpolationMargin m;
    m.lhs = (b * t.hess + k * t.w2) * cell;
    m.scale = m.lhs;
    const double sbk = std::sqrt(b * k);
    m.gradient_term = 2.0 * sbk * t.grad_chi * cell;
    m.square_term = t.sq_chi * cell;
    m.chi_gradient_term = 2.0 * sbk * t.gchi * std::sqrt(t.w2 * cell) * std::sqrt(t.gw2 * cell);
    m.chi_hessian_term = b * t.hchi * t.gw2 * cell;
    m.margin = m.lhs - (m.gradient_term + m.square_term - m.chi_gradient_term - m.chi_hessian_term);
    return m;
}

void check_regime(const std::vector<EnergyParams>& seq) {
    for (const EnergyParams& p : seq) p.validate();
    auto num = [](double v) {
        std::ostringstream s;
        s.precision(4);
        s << v;
        return s.str();
    };
    for (std::size_t i = 1; i < seq.size(); ++i) {
        const EnergyParams &a = seq[i - 1], &c = seq[i];
        if (!(c.b / c.k < a.b / a.k)) fail(ErrorKind::regime, "b/k must decrease along the sequence");
        if (c.gamma / c.k > a.gamma / a.k) fail(ErrorKind::regime, "gamma/k must not increase along the sequence");
        if (!(c.gamma_eff() < a.gamma_eff())) fail(ErrorKind::regime, "2 sqrt(bk) + gamma must decrease");
        const double ra = std::pow(a.b / a.k, 0.1) / a.gamma_eff(), rc = std::pow(c.b / c.k, 0.1) / c.gamma_eff();
        if (rc > ra)
            fail(ErrorKind::regime, "(b/k)^(1/10) / (2 sqrt(bk) + gamma) grows from " + num(ra) + " to " + num(rc) +
                                        ": the sequence leaves the asymptotic regime");
    }
}

ScalingReport scaling_study(const Domain& domain, const ShellProfile& shell, const std::vector<EnergyParams>& seq,
                            const ScalingOptions& opts) {
    if (seq.empty()) fail(ErrorKind::parameter, "scaling study needs at least one parameter set");
    if (opts.enforce_regime) check_regime(seq);
    for (const EnergyParams& p : seq) p.validate();
    ScalingReport rep;
    TargetFunction mu;
    std::optional<DefectField> defect;
    if (shell.sign() == CurvatureSign::zero) {
        mu = [](Point2) { return std::optional<Sym2>(Sym2{}); };
    } else {
        defect.emplace(defect_field(domain, shell, opts.defect));
        rep.primal = defect->primal();
        const DefectField* f = &*defect;
        mu = [f](Point2 x) { return f->mu_at(x); };
    }
    for (const EnergyParams& p : seq) {
        ScalingPoint pt;
        pt.params = p;
        pt.x = std::pow(p.b / p.k, 0.1);
        HerringboneParams hp = optimal_params(p.b, p.k, 0.0);
        const PiecewiseHerringbone field(domain, mu, hp, opts.average_samples, false);
        if (opts.enforce_regime) {
            hp = optimal_params(p.b, p.k, field.ratio());
            check_piecewise(hp, field.ratio());
        }
        pt.herringbone = hp;
        pt.energy = energy_against_target(field, domain, mu, p, hp.l_wr / opts.resolution);
        pt.ratio = pt.energy.total / p.gamma_eff();
        pt.wrinkling_ratio = (pt.energy.bending + pt.energy.substrate) / p.gamma_eff();
        rep.points.push_back(pt);
    }
    // weighted least squares ratio = c1 + slope x, weights 1/x
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const ScalingPoint& pt : rep.points) {
        const double wgt = 1.0 / pt.x;
        sw += wgt;
        sx += wgt * pt.x;
        sy += wgt * pt.ratio;
        sxx += wgt * pt.x * pt.x;
        sxy += wgt * pt.x * pt.ratio;
    }
    const double den = sw * sxx - sx * sx;
    if (rep.points.size() >= 2 && std::abs(den) > 1e-300) {
        rep.slope = (sw * sxy - sx * sy) / den;
        rep.c1 = (sy - rep.slope * sx) / sw;
    } else {
        rep.c1 = sy / sw;
    }
    rep.residuals_decreasing = true;
    double lx = 0, ly = 0, lxx = 0, lxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < rep.points.size(); ++i) {
        const double r = rep.points[i].ratio - rep.c1;
        rep.residuals.push_back(r);
        if (i > 0 && std::abs(r) > std::abs(rep.residuals[i - 1])) rep.residuals_decreasing = false;
        if (std::abs(r) > 0.0) {
            const double X = std::log(rep.points[i].x), Y = std::log(std::abs(r));
            lx += X;
            ly += Y;
            lxx += X * X;
            lxy += X * Y;
            ++m;
        }
    }
    if (m >= 2 && std::abs(m * lxx - lx * lx) > 1e-300) rep.decay_exponent = (m * lxy - lx * ly) / (m * lxx - lx * lx);
    return rep;
}

}  // namespace wrinkle
