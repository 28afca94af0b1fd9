#include "wrinkle/render.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "wrinkle/error.hpp"

namespace wrinkle {

std::string fmt9(double v) {
    if (std::isnan(v)) return "nan";
    if (v == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

SvgCanvas::SvgCanvas(Box world, double width_px, double margin_px) : world_(world), margin_(margin_px) {
    if (!(world.width() > 0.0) || !(world.height() > 0.0)) fail(ErrorKind::parameter, "empty canvas box");
    scale_ = width_px / world.width();
    width_ = width_px + 2.0 * margin_;
    height_ = world.height() * scale_ + 2.0 * margin_;
}

Point2 SvgCanvas::map(Point2 x) const {
    return {margin_ + (x.x - world_.lo.x) * scale_, margin_ + (world_.hi.y - x.y) * scale_};
}

void SvgCanvas::line(Point2 a, Point2 b, const std::string& stroke, double width, double opacity) {
    const Point2 p = map(a), q = map(b);
    body_ += "<line x1=\"" + fmt9(p.x) + "\" y1=\"" + fmt9(p.y) + "\" x2=\"" + fmt9(q.x) + "\" y2=\"" + fmt9(q.y) +
             "\" stroke=\"" + stroke + "\" stroke-width=\"" + fmt9(width) + "\"";
    if (opacity < 1.0) body_ += " stroke-opacity=\"" + fmt9(opacity) + "\"";
    body_ += "/>\n";
}

void SvgCanvas::polyline(const std::vector<Point2>& pts, const std::string& stroke, double width, bool closed,
                         const std::string& fill) {
    if (pts.empty()) return;
    std::string d;
    for (const Point2& x : pts) {
        const Point2 p = map(x);
        if (!d.empty()) d += ' ';
        d += fmt9(p.x) + "," + fmt9(p.y);
    }
    body_ += std::string("<") + (closed ? "polygon" : "polyline") + " points=\"" + d + "\" fill=\"" + fill +
             "\" stroke=\"" + stroke + "\" stroke-width=\"" + fmt9(width) + "\" stroke-linejoin=\"round\"/>\n";
}

void SvgCanvas::cell(Point2 lo, Point2 hi, const std::string& fill) {
    const Point2 a = map({lo.x, hi.y}), b = map({hi.x, lo.y});
    body_ += "<rect x=\"" + fmt9(a.x) + "\" y=\"" + fmt9(a.y) + "\" width=\"" + fmt9(b.x - a.x) + "\" height=\"" +
             fmt9(b.y - a.y) + "\" fill=\"" + fill + "\" shape-rendering=\"crispEdges\"/>\n";
}

void SvgCanvas::dot(Point2 c, double radius_px, const std::string& fill) {
    const Point2 p = map(c);
    body_ += "<circle cx=\"" + fmt9(p.x) + "\" cy=\"" + fmt9(p.y) + "\" r=\"" + fmt9(radius_px) + "\" fill=\"" +
             fill + "\"/>\n";
}

std::string SvgCanvas::str() const {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt9(width_) + "\" height=\"" + fmt9(height_) +
           "\" viewBox=\"0 0 " + fmt9(width_) + " " + fmt9(height_) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" +
           body_ + "</svg>\n";
}

namespace {

std::vector<Point2> outline(const Domain& d) {
    std::vector<Point2> pts;
    for (const BoundaryPoint& b : d.boundary_sample(720)) pts.push_back(b.position);
    return pts;
}

bool is_unconstrained(const StableLineFamily& f, const StableLine& l) {
    return l.group >= 0 && static_cast<std::size_t>(l.group) < f.groups.size() && f.groups[l.group]->unconstrained();
}

}  // namespace

std::string pattern_svg(const Domain& domain, const Partition& part, const StableLineFamily& family) {
    SvgCanvas c(domain.bounding_box());
    for (const StableLine& l : family.lines)
        if (!is_unconstrained(family, l)) c.line(l.start, l.end, "#1f3b73", 0.6);
    if (part.has_sigma()) {
        const MedialAxis& m = part.sigma();
        for (const MedialSegment& s : m.polyline(128)) c.line(s.a, s.b, "black", 2.0);
        for (const Point2& p : m.points) c.dot(p, 3.0, "black");
    }
    c.polyline(outline(domain), "black", 1.2, true);
    return c.str();
}

std::string viridis(double t) {
    static const double stops[5][3] = {
        {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
    t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0) * 4.0;
    const int i = std::min(3, static_cast<int>(t));
    const double f = t - i;
    char buf[8];
    int rgb[3];
    for (int k = 0; k < 3; ++k) rgb[k] = static_cast<int>(std::lround(stops[i][k] + f * (stops[i + 1][k] - stops[i][k])));
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
    return buf;
}

std::string defect_svg(const DefectField& defect, const StableLineFamily& family) {
    const MaskedGrid& g = defect.grid();
    SvgCanvas c(g.box());
    const auto& lam = defect.lambda_grid();
    double peak = 0.0;
    for (double v : lam)
        if (std::isfinite(v)) peak = std::max(peak, v);
    const int stride = std::max(1, std::max(g.nx(), g.ny()) / 200);
    for (int j = 0; j < g.ny(); j += stride)
        for (int i = 0; i < g.nx(); i += stride) {
            double s = 0.0;
            int n = 0;
            for (int b = j; b < std::min(g.ny(), j + stride); ++b)
                for (int a = i; a < std::min(g.nx(), i + stride); ++a) {
                    const double v = lam[g.index(a, b)];
                    if (std::isfinite(v)) {
                        s += v;
                        ++n;
                    }
                }
            if (n == 0) continue;
            const Point2 lo{g.box().lo.x + i * g.dx(), g.box().lo.y + j * g.dy()};
            const Point2 hi{g.box().lo.x + std::min(g.nx(), i + stride) * g.dx(),
                            g.box().lo.y + std::min(g.ny(), j + stride) * g.dy()};
            c.cell(lo, hi, viridis(peak > 0.0 ? s / n / peak : 0.0));
        }
    const std::size_t every = std::max<std::size_t>(1, family.lines.size() / 120);
    for (std::size_t k = 0; k < family.lines.size(); k += every) {
        const StableLine& l = family.lines[k];
        if (!is_unconstrained(family, l)) c.line(l.start, l.end, "white", 0.6, 0.7);
    }
    c.polyline(outline(defect.domain()), "black", 1.2, true);
    return c.str();
}

std::string contour_svg(const DisplacementField& field, const Domain& domain) {
    const int stride = std::max(1, std::max(field.nx(), field.ny()) / 600);
    const int nx = (field.nx() - 1) / stride + 1, ny = (field.ny() - 1) / stride + 1;
    auto W = [&](int i, int j) { return field.w(i * stride, j * stride); };
    auto P = [&](int i, int j) { return field.node(i * stride, j * stride); };
    double peak = 0.0;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) peak = std::max(peak, std::abs(W(i, j)));
    const Box box{field.node(0, 0), field.node(field.nx() - 1, field.ny() - 1)};
    SvgCanvas c(box);
    const struct {
        double level;
        const char* color;
    } levels[] = {{-0.5 * peak, "#2166ac"}, {0.0, "#444444"}, {0.5 * peak, "#b2182b"}};
    for (const auto& lv : levels) {
        if (peak == 0.0) break;
        std::string d;
        for (int j = 0; j + 1 < ny; ++j)
            for (int i = 0; i + 1 < nx; ++i) {
                const double v[4] = {W(i, j) - lv.level, W(i + 1, j) - lv.level, W(i + 1, j + 1) - lv.level,
                                     W(i, j + 1) - lv.level};
                const Point2 p[4] = {P(i, j), P(i + 1, j), P(i + 1, j + 1), P(i, j + 1)};
                Point2 cross[4];
                int n = 0;
                for (int e = 0; e < 4; ++e) {
                    const double a = v[e], b = v[(e + 1) % 4];
                    if ((a < 0.0) != (b < 0.0)) cross[n++] = p[e] + (a / (a - b)) * (p[(e + 1) % 4] - p[e]);
                }
                for (int k = 0; k + 1 < n; k += 2) {
                    if (!domain.contains(0.5 * (cross[k] + cross[k + 1]))) continue;
                    const Point2 a = c.map(cross[k]), b = c.map(cross[k + 1]);
                    d += "M" + fmt9(a.x) + " " + fmt9(a.y) + "L" + fmt9(b.x) + " " + fmt9(b.y);
                }
            }
        c.raw("<path d=\"" + d + "\" fill=\"none\" stroke=\"" + lv.color + "\" stroke-width=\"0.6\"/>\n");
    }
    c.polyline(outline(domain), "black", 1.2, true);
    return c.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::config, "cannot write " + path);
    out << text;
}

void write_pattern_csv(const std::string& path, const StableLineFamily& family) {
    std::string s = "x1,y1,x2,y2,eta_x,eta_y,start_kind,end_kind\n";
    for (const StableLine& l : family.lines)
        s += fmt9(l.start.x) + "," + fmt9(l.start.y) + "," + fmt9(l.end.x) + "," + fmt9(l.end.y) + "," +
             fmt9(l.eta.x) + "," + fmt9(l.eta.y) + "," + to_string(l.start_kind) + "," + to_string(l.end_kind) + "\n";
    write_text(path, s);
}

void write_medial_csv(const std::string& path, const MedialAxis& axis) {
    std::string s = "x1,y1,x2,y2\n";
    for (const MedialSegment& m : axis.polyline(128))
        s += fmt9(m.a.x) + "," + fmt9(m.a.y) + "," + fmt9(m.b.x) + "," + fmt9(m.b.y) + "\n";
    for (const Point2& p : axis.points) s += fmt9(p.x) + "," + fmt9(p.y) + "," + fmt9(p.x) + "," + fmt9(p.y) + "\n";
    write_text(path, s);
}

void write_defect_csv(const std::string& path, const DefectField& defect) {
    const MaskedGrid& g = defect.grid();
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::config, "cannot write " + path);
    out << "x,y,lambda,eta_x,eta_y\n";
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            if (!g.center_inside(i, j)) continue;
            const Point2 x = g.center(i, j);
            const std::size_t k = g.index(i, j);
            const Vec2 e = defect.eta_grid()[k];
            out << fmt9(x.x) << ',' << fmt9(x.y) << ',' << fmt9(defect.lambda_grid()[k]) << ',' << fmt9(e.x) << ','
                << fmt9(e.y) << '\n';
        }
}

void write_heightmap_csv(const std::string& path, const DisplacementField& field) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::config, "cannot write " + path);
    out << "x,y,w\n";
    for (int j = 0; j < field.ny(); ++j)
        for (int i = 0; i < field.nx(); ++i) {
            const Point2 x = field.node(i, j);
            out << fmt9(x.x) << ',' << fmt9(x.y) << ',' << fmt9(field.w(i, j)) << '\n';
        }
}

}  // namespace wrinkle
