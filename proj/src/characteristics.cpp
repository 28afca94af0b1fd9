#include "wrinkle/characteristics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "wrinkle/error.hpp"
#include "wrinkle/parallel.hpp"

namespace wrinkle {

namespace {

double sample_at(const std::vector<double>& v, double len, double t) {
    const std::size_t n = v.size();
    if (n == 0) return 0.0;
    if (n == 1 || len <= 0.0) return v[0];
    const double u = std::clamp(t / len, 0.0, 1.0) * static_cast<double>(n - 1);
    const std::size_t i = std::min(static_cast<std::size_t>(u), n - 2);
    const double w = u - static_cast<double>(i);
    return (1.0 - w) * v[i] + w * v[i + 1];
}

// cumulative trapezoid with I(0) = 0
std::vector<double> cumtrapz(const std::vector<double>& f, double h) {
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t i = 1; i < f.size(); ++i) out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
    return out;
}

LineSolution solve_line(const StableLine& line, const LineFunction& rho, const LineFunction& K, int samples,
                        bool cauchy) {
    const double L = line.length();
    if (!(L > 0.0) || !std::isfinite(L)) fail(ErrorKind::degenerate, "stable line of zero length");
    if (samples < 3) fail(ErrorKind::resolution, "at least 3 samples per line");
    const std::size_t n = static_cast<std::size_t>(samples);
    const double h = L / static_cast<double>(n - 1);
    std::vector<double> r(n), f(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * h;
        r[i] = rho(t);
        const bool may_vanish = cauchy && i == 0;
        if (!(r[i] > 0.0) && !(may_vanish && r[i] == 0.0))
            fail(ErrorKind::data, "change-of-measure factor must be positive on the line");
        f[i] = r[i] * K(t);
    }
    const auto I1 = cumtrapz(f, h);
    const auto I2 = cumtrapz(I1, h);
    const double c = cauchy ? 0.0 : 2.0 * I2.back() / L;
    LineSolution sol;
    sol.line = line;
    sol.data_kind = cauchy ? DataKind::cauchy : DataKind::two_point_bvp;
    sol.lambda.resize(n);
    double peak = 0.0, low = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double g = -2.0 * I2[i] + c * static_cast<double>(i) * h;
        sol.lambda[i] = r[i] > 0.0 ? g / r[i] : 0.0;
        peak = std::max(peak, std::abs(sol.lambda[i]));
        low = std::min(low, sol.lambda[i]);
    }
    if (!cauchy) sol.lambda.back() = 0.0;
    sol.flux_start = c;
    sol.flux_end = -2.0 * I1.back() + c;
    sol.rho_start = r.front();
    sol.rho_end = r.back();
    sol.sign_violation = low < -1e-8 * std::max(1.0, peak);
    return sol;
}

bool boundary_like(EndKind k) {
    return k == EndKind::boundary || k == EndKind::corner || k == EndKind::interface;
}

}  // namespace

double LineSolution::lambda_at(double t) const { return sample_at(lambda, length(), t); }

double LineSolution::lambda_at_relative(double tau) const { return sample_at(lambda, 1.0, tau); }

double LineSolution::min_lambda() const {
    return lambda.empty() ? 0.0 : *std::min_element(lambda.begin(), lambda.end());
}

LineSolution solve_bvp(const StableLine& line, const LineFunction& rho, const LineFunction& K, int samples) {
    if (!boundary_like(line.start_kind) || !boundary_like(line.end_kind))
        fail(ErrorKind::wrong_data, "two-point problem needs boundary data at both ends");
    return solve_line(line, rho, K, samples, false);
}

LineSolution solve_cauchy(const StableLine& line, const LineFunction& rho, const LineFunction& K, int samples) {
    if (line.start_kind != EndKind::medial_axis && line.start_kind != EndKind::focal_point)
        fail(ErrorKind::wrong_data, "Cauchy data must sit on the medial axis or a focal point");
    return solve_line(line, rho, K, samples, true);
}

double SingularLine::lambda_at(double sigma) const { return sample_at(lambda, length(), sigma); }

double SingularLine::mass() const {
    if (lambda.size() < 2) return 0.0;
    const double h = length() / static_cast<double>(lambda.size() - 1);
    double s = 0.0;
    for (std::size_t i = 1; i < lambda.size(); ++i) s += 0.5 * h * (lambda[i - 1] + lambda[i]);
    return s;
}

// ---------------------------------------------------------------- field

namespace {

// Interpolates a per-line quantity between the two sampled lines of the same
// group that bracket the continuum line through a point.
template <class F>
std::optional<double> bracket(const DefectComponent& part, int group, const LineCoord& c, double spacing, bool clamp,
                              F&& value) {
    const auto& g = *part.family.groups[group];
    if (c.sub < 0 || static_cast<std::size_t>(c.sub) >= part.index[group].size()) return std::nullopt;
    const auto& list = part.index[group][c.sub];
    if (list.empty()) return std::nullopt;
    const double tau = c.length > 0.0 ? c.t / c.length : 0.0;
    auto at = [&](std::size_t k) { return value(part.solutions[list[k].second], tau); };
    const double s = c.s;
    const double period = g.period(c.sub);
    const auto it = std::upper_bound(list.begin(), list.end(), s,
                                     [](double v, const std::pair<double, std::size_t>& e) { return v < e.first; });
    const std::size_t k = static_cast<std::size_t>(it - list.begin());
    auto lerp = [](double s0, double v0, double s1, double v1, double x) {
        if (s1 == s0) return v0;
        const double w = (x - s0) / (s1 - s0);
        return (1.0 - w) * v0 + w * v1;
    };
    if (k > 0 && k < list.size()) return lerp(list[k - 1].first, at(k - 1), list[k].first, at(k), s);
    if (period > 0.0) {
        const std::size_t last = list.size() - 1;
        double x = s;
        if (k == 0) x += period;
        return lerp(list[last].first, at(last), list[0].first + period, at(0), x);
    }
    if (list.size() == 1) {
        if (std::abs(s - list[0].first) > 1.5 * spacing) return std::nullopt;
        return at(0);
    }
    const std::size_t i0 = k == 0 ? 0 : list.size() - 2;
    const std::size_t i1 = i0 + 1;
    const double edge = k == 0 ? list.front().first : list.back().first;
    if (std::abs(s - edge) > 1.5 * spacing) return std::nullopt;
    double v = lerp(list[i0].first, at(i0), list[i1].first, at(i1), s);
    if (clamp) v = std::max(v, 0.0);
    return v;
}

double lambda_value(const LineSolution& sol, double tau) { return sol.lambda_at_relative(tau); }

std::vector<SingularLine> interface_lines(const Domain& domain, const DefectComponent& part, double spacing,
                                          int samples) {
    std::vector<SingularLine> out;
    const double scale = domain.diameter();
    for (std::size_t gi = 0; gi < part.family.groups.size(); ++gi) {
        const auto& g = *part.family.groups[gi];
        const ConvexRegion* reg = g.region();
        if (!g.unconstrained() || !reg || reg->kind != ConvexRegion::Kind::polygon) continue;
        const auto& poly = reg->polygon;
        for (std::size_t e = 0; e < poly.size(); ++e) {
            const Point2 a = poly[e], b = poly[(e + 1) % poly.size()];
            if (domain.boundary_distance(0.5 * (a + b)) <= 1e-9 * scale) continue;
            const double len = norm(b - a);
            const Vec2 dir = (b - a) / len;
            const Vec2 n_out{dir.y, -dir.x};  // polygon is counter-clockwise
            const std::size_t m = static_cast<std::size_t>(std::max(samples, 3));
            const double h = len / static_cast<double>(m - 1);
            std::vector<double> load(m, 0.0);
            for (std::size_t i = 0; i < m; ++i) {
                const Point2 x = a + (static_cast<double>(i) * h) * dir - (1e-12 * scale) * n_out;
                const auto c = g.locate(x);
                if (!c) continue;
                const bool at_start = c->t < 0.5 * c->length;
                const auto flux = bracket(part, static_cast<int>(gi), *c, spacing, false,
                                          [&](const LineSolution& s, double) { return at_start ? s.flux_start : s.flux_end; });
                if (!flux) continue;
                load[i] = std::abs(*flux) * std::abs(dot(perp(c->eta), n_out));
            }
            const auto I1 = cumtrapz(load, h);
            const auto I2 = cumtrapz(I1, h);
            SingularLine sl;
            sl.a = a;
            sl.b = b;
            sl.eta = n_out;
            sl.lambda.resize(m);
            for (std::size_t i = 0; i < m; ++i)
                sl.lambda[i] = -I2[i] + static_cast<double>(i) * h * I2.back() / len;
            sl.lambda.back() = 0.0;
            out.push_back(std::move(sl));
        }
    }
    return out;
}

DefectComponent build_component(const Domain& domain, const ShellProfile& shell, const AiryField& airy, double spacing,
                                int samples, const UDecomposition& u, double weight) {
    DefectComponent part;
    part.weight = weight;
    part.family = stable_lines(domain, airy, spacing, u);
    const auto& fam = part.family;
    part.solutions.resize(fam.lines.size());
    parallel_for(fam.lines.size(), [&](std::size_t i) {
        const auto& line = fam.lines[i];
        const auto& g = *fam.groups[line.group];
        const LineFunction rho = [&](double t) { return g.rho_raw(line.sub, line.index, t); };
        const LineFunction K = [&](double t) { return shell.curvature(line.at(t)); };
        part.solutions[i] = g.data_kind() == DataKind::cauchy ? solve_cauchy(line, rho, K, samples)
                                                              : solve_bvp(line, rho, K, samples);
    });
    part.index.resize(fam.groups.size());
    for (std::size_t i = 0; i < fam.lines.size(); ++i) {
        const auto& line = fam.lines[i];
        auto& subs = part.index[line.group];
        if (subs.size() <= static_cast<std::size_t>(line.sub)) subs.resize(line.sub + 1);
        subs[line.sub].push_back({line.index, i});
    }
    for (auto& subs : part.index)
        for (auto& l : subs) std::sort(l.begin(), l.end());
    part.singular = interface_lines(domain, part, spacing, samples);
    return part;
}

}  // namespace

DefectField::DefectField(Domain domain, ShellProfile shell, AiryField airy, DefectOptions opts,
                         std::vector<DefectComponent> parts)
    : domain_(std::move(domain)), shell_(std::move(shell)), airy_(std::move(airy)), opts_(std::move(opts)),
      parts_(std::make_shared<const std::vector<DefectComponent>>(std::move(parts))), grid_(domain_, opts_.grid) {
    rasterize();
}

std::optional<double> DefectField::lambda_at(Point2 x) const {
    if (!domain_.contains(x, 1e-10 * domain_.diameter())) return std::nullopt;
    double total = 0.0;
    for (const auto& part : *parts_) {
        const auto loc = part.family.locate(x);
        if (!loc) return std::nullopt;
        const auto v = bracket(part, loc->first, loc->second, part.family.spacing, true, lambda_value);
        if (!v) return std::nullopt;
        total += part.weight * *v;
    }
    return scale_ * total;
}

std::optional<Sym2> DefectField::mu_at(Point2 x) const {
    if (!domain_.contains(x, 1e-10 * domain_.diameter())) return std::nullopt;
    Sym2 total{};
    for (const auto& part : *parts_) {
        const auto loc = part.family.locate(x);
        if (!loc) return std::nullopt;
        const auto v = bracket(part, loc->first, loc->second, part.family.spacing, true, lambda_value);
        if (!v) return std::nullopt;
        total += (part.weight * *v) * outer(loc->second.eta);
    }
    return scale_ * total;
}

Vec2 DefectField::eta_at(Point2 x) const {
    if (parts_->empty()) return {};
    const auto loc = parts_->front().family.locate(x);
    return loc ? loc->second.eta : Vec2{};
}

void DefectField::rasterize() {
    const int nx = grid_.nx(), ny = grid_.ny();
    lambda_.assign(static_cast<std::size_t>(nx) * ny, std::numeric_limits<double>::quiet_NaN());
    eta_.assign(lambda_.size(), Vec2{});
    std::vector<int> missing(ny, 0);
    parallel_for(ny, [&](std::size_t jj) {
        const int j = static_cast<int>(jj);
        for (int i = 0; i < nx; ++i) {
            if (!grid_.center_inside(i, j)) continue;
            const Point2 x = grid_.center(i, j);
            const auto v = lambda_at(x);
            if (!v) {
                ++missing[jj];
                continue;
            }
            lambda_[grid_.index(i, j)] = *v;
            eta_[grid_.index(i, j)] = eta_at(x);
        }
    });
    uncovered_ = 0;
    for (int m : missing) uncovered_ += m;

    const double bulk = grid_.integrate([&](Point2 x) { return lambda_at(x).value_or(0.0); });
    double covered = grid_.measure();
    if (uncovered_ > 0) covered = grid_.integrate([&](Point2 x) { return lambda_at(x) ? 1.0 : 0.0; });
    const double full = grid_.measure();
    double p = covered > 0.0 ? 0.5 * bulk * full / covered : 0.0;
    for (const auto& part : *parts_)
        for (const auto& sl : part.singular) p += 0.5 * part.weight * scale_ * sl.mass();
    primal_ = p;
}

double DefectField::min_lambda() const {
    double m = std::numeric_limits<double>::infinity();
    for (double v : lambda_)
        if (!std::isnan(v)) m = std::min(m, v);
    return std::isfinite(m) ? m : 0.0;
}

bool DefectField::sign_violation() const {
    for (const auto& part : *parts_)
        for (const auto& s : part.solutions)
            if (s.sign_violation) return true;
    return false;
}

DefectField DefectField::scaled(double s) const {
    DefectField out = *this;
    out.scale_ = scale_ * s;
    for (double& v : out.lambda_) v *= s;
    out.primal_ = primal_ * s;
    return out;
}

DefectField defect_field(const Domain& domain, const ShellProfile& shell, const DefectOptions& opts) {
    AiryField airy = solve_dual(domain, shell);
    const MaskedGrid probe(domain, opts.grid);
    const double spacing = opts.spacing > 0.0 ? opts.spacing : std::max(probe.dx(), probe.dy());
    const int samples = opts.line_samples > 0 ? opts.line_samples : std::max(2000, 4 * std::max(opts.grid.nx, opts.grid.ny));
    std::vector<DefectComponent> parts;
    const Partition part = partition(domain, airy);
    if (opts.u.kind == UDecomposition::Kind::mixture && !part.is_empty(RegionLabel::unconstrained)) {
        if (!(opts.u.weight >= 0.0 && opts.u.weight <= 1.0)) fail(ErrorKind::parameter, "mixture weight outside [0, 1]");
        UDecomposition first = opts.u, second = opts.u;
        first.kind = second.kind = UDecomposition::Kind::parallel;
        second.angle = opts.u.angle2;
        parts.push_back(build_component(domain, shell, airy, spacing, samples, first, opts.u.weight));
        parts.push_back(build_component(domain, shell, airy, spacing, samples, second, 1.0 - opts.u.weight));
    } else {
        parts.push_back(build_component(domain, shell, airy, spacing, samples, opts.u, 1.0));
    }
    return DefectField(domain, shell, std::move(airy), opts, std::move(parts));
}

double primal_value(const DefectField& defect) { return defect.primal(); }

// ---------------------------------------------------------------- residual

namespace {

constexpr std::array<double, 8> gl_x{-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                                     0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> gl_w{0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                                     0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

struct Bump {
    Point2 c;
    double r;
    double psi(Point2 x) const {
        const double q = norm2(x - c) / (r * r);
        return q >= 1.0 ? 0.0 : (1.0 - q) * (1.0 - q);
    }
    Sym2 hessian(Point2 x) const {
        const Vec2 d = x - c;
        const double q = norm2(d) / (r * r);
        if (q >= 1.0) return {};
        return (-4.0 / (r * r)) * ((1.0 - q) * identity2() - (2.0 / (r * r)) * outer(d));
    }
};

// parameters in (0, r) where the ray c + rho e crosses a segment
void ray_crossings(Point2 c, Vec2 e, double r, const std::vector<MedialSegment>& segs, std::vector<double>& out) {
    for (const auto& s : segs) {
        const Vec2 d = s.b - s.a;
        const double den = cross(e, d);
        if (std::abs(den) < 1e-14 * norm(d)) continue;
        const Vec2 w = s.a - c;
        const double rho = cross(w, d) / den;
        const double sig = cross(w, e) / den;
        if (rho > 0.0 && rho < r && sig >= 0.0 && sig <= 1.0) out.push_back(rho);
    }
}

// Angular panel ends for polar quadrature about c: a uniform base split plus
// every angle at which the set of kink crossings changes shape.
std::vector<double> angular_breaks(Point2 c, double r, const std::vector<MedialSegment>& segs) {
    std::vector<double> out;
    const int base = 32;
    for (int i = 0; i <= base; ++i) out.push_back(2.0 * pi * i / base);
    auto add = [&](Vec2 v) {
        if (norm(v) <= 1e-14 * r) return;
        double a = std::atan2(v.y, v.x);
        if (a < 0.0) a += 2.0 * pi;
        out.push_back(a);
    };
    for (const auto& s : segs) {
        const Vec2 d = s.b - s.a;
        const double len = norm(d);
        if (len <= 0.0 || segment_distance(c, s.a, s.b) >= r) continue;
        if (norm(s.a - c) < r) add(s.a - c);
        if (norm(s.b - c) < r) add(s.b - c);
        const Vec2 e = d / len, w = s.a - c;
        const double bq = dot(w, e), disc = bq * bq - (norm2(w) - r * r);
        if (disc > 0.0)
            for (double sg : {-1.0, 1.0}) {
                const double t = -bq + sg * std::sqrt(disc);
                if (t > 0.0 && t < len) add(w + t * e);
            }
        const double tf = -bq;
        if (tf > 0.0 && tf < len) add(w + tf * e);
    }
    std::sort(out.begin(), out.end());
    std::vector<double> uniq;
    for (double a : out)
        if (uniq.empty() || a - uniq.back() > 1e-12) uniq.push_back(a);
    return uniq;
}

}  // namespace

ResidualReport curlcurl_residual(const DefectField& defect, const ShellProfile& shell, int test_count) {
    if (test_count < 4) fail(ErrorKind::parameter, "at least 4 x 4 test functions");
    const Domain& dom = defect.domain();
    const Box bb = dom.bounding_box();
    const Point2 p0 = dom.interior_point();
    const int n = test_count;
    const double base = std::min(bb.width(), bb.height()) / n;
    auto centers = [&](double f) {
        std::vector<Point2> cs;
        const double step = f * base;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                cs.push_back(p0 + step * Vec2{i - 0.5 * (n - 1), j - 0.5 * (n - 1)});
        return cs;
    };
    auto fits = [&](double f) {
        const double r = 2.0 * f * base;
        for (const auto& c : centers(f))
            if (!dom.contains(c) || dom.boundary_distance(c) < r * (1.0 + 1e-9)) return false;
        return true;
    };
    double lo = 0.0, hi = 1.0;
    if (fits(1.0)) lo = 1.0;
    else
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (fits(mid) ? lo : hi) = mid;
        }
    if (!(lo > 0.0)) fail(ErrorKind::degenerate, "no interior test lattice");
    const double radius = 2.0 * lo * base;
    const auto cs = centers(lo);

    std::vector<MedialSegment> kinks;
    const Partition part = partition(dom, defect.airy());
    if (part.has_sigma()) kinks = part.sigma().polyline(128);
    for (const auto& s : part.interfaces()) kinks.push_back(s);
    // chords of unconstrained groups through region corners
    for (const auto& comp : defect.components()) {
        for (const auto& g : comp.family.groups) {
            const ConvexRegion* reg = g->region();
            if (!g->unconstrained() || !reg || reg->kind != ConvexRegion::Kind::polygon) continue;
            Point2 mid{};
            for (const auto& v : reg->polygon) mid += v / static_cast<double>(reg->polygon.size());
            const auto c = g->locate(mid);
            if (!c) continue;
            const Vec2 u = perp(c->eta);
            for (const auto& v : reg->polygon)
                if (const auto ch = reg->chord(v, u)) kinks.push_back({v + ch->first * u, v + ch->second * u});
        }
    }

    ResidualReport rep;
    rep.tests = n * n;
    rep.radius = radius;
    rep.residuals.assign(cs.size(), 0.0);
    parallel_for(cs.size(), [&](std::size_t b) {
        const Bump bump{cs[b], radius};
        const auto panels = angular_breaks(bump.c, radius, kinks);
        double total = 0.0;
        std::vector<double> breaks;
        for (std::size_t p = 0; p + 1 < panels.size(); ++p) {
            const double t0 = panels[p], t1 = panels[p + 1];
            for (std::size_t qa = 0; qa < gl_x.size(); ++qa) {
                const double theta = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * gl_x[qa];
                const Vec2 e = unit(theta);
                breaks.assign({0.0, radius});
                ray_crossings(bump.c, e, radius, kinks, breaks);
                std::sort(breaks.begin(), breaks.end());
                double ray = 0.0;
                for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
                    const double r0 = breaks[k], r1 = breaks[k + 1];
                    if (r1 - r0 <= 0.0) continue;
                    for (std::size_t q = 0; q < gl_x.size(); ++q) {
                        const double rho = 0.5 * (r0 + r1) + 0.5 * (r1 - r0) * gl_x[q];
                        const Point2 x = bump.c + rho * e;
                        const Sym2 mu = defect.mu_at(x).value_or(Sym2{});
                        const double f =
                            -0.5 * ddot(cofactor(bump.hessian(x)), mu) - bump.psi(x) * shell.curvature(x);
                        ray += 0.5 * (r1 - r0) * gl_w[q] * f * rho;
                    }
                }
                total += 0.5 * (t1 - t0) * gl_w[qa] * ray;
            }
        }
        for (const auto& comp : defect.components()) {
            for (const auto& sl : comp.singular) {
                const Vec2 d = sl.b - sl.a;
                const double len = norm(d);
                const Vec2 e = d / len;
                const Vec2 w = sl.a - bump.c;
                const double bq = dot(w, e), cq = norm2(w) - radius * radius;
                const double disc = bq * bq - cq;
                if (disc <= 0.0) continue;
                const double s0 = std::max(0.0, -bq - std::sqrt(disc)), s1 = std::min(len, -bq + std::sqrt(disc));
                if (s1 <= s0) continue;
                const Sym2 eta2 = outer(sl.eta);
                double line = 0.0;
                for (int piece = 0; piece < 4; ++piece) {
                    const double a0 = s0 + (s1 - s0) * piece / 4.0, a1 = s0 + (s1 - s0) * (piece + 1) / 4.0;
                    for (std::size_t q = 0; q < gl_x.size(); ++q) {
                        const double s = 0.5 * (a0 + a1) + 0.5 * (a1 - a0) * gl_x[q];
                        const Point2 x = sl.a + s * e;
                        line += 0.5 * (a1 - a0) * gl_w[q] * sl.lambda_at(s) * ddot(cofactor(bump.hessian(x)), eta2);
                    }
                }
                total += -0.5 * comp.weight * defect.scale() * line;
            }
        }
        rep.residuals[b] = std::abs(total);
    });
    for (double r : rep.residuals) rep.max_residual = std::max(rep.max_residual, r);
    rep.k_l1 = defect.grid().integrate([&](Point2 x) { return std::abs(shell.curvature(x)); });
    return rep;
}

}  // namespace wrinkle
