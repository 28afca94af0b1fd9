#include "wrinkle/shell.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "wrinkle/error.hpp"

namespace wrinkle {

const char* to_string(CurvatureSign s) {
    switch (s) {
        case CurvatureSign::zero: return "zero";
        case CurvatureSign::positive: return "positive";
        case CurvatureSign::negative: return "negative";
        case CurvatureSign::mixed: return "mixed";
    }
    return "unknown";
}

namespace {

CurvatureSign classify(double lo, double hi) {
    const double scale = std::max(std::abs(lo), std::abs(hi));
    const double tol = 1e-12 * scale;
    if (scale == 0.0) return CurvatureSign::zero;
    if (lo >= -tol) return CurvatureSign::positive;
    if (hi <= tol) return CurvatureSign::negative;
    return CurvatureSign::mixed;
}

}  // namespace

ShellProfile ShellProfile::flat() {
    ShellProfile s;
    s.kind_ = Kind::paraboloid;
    s.height_known_ = true;
    return s;
}

ShellProfile ShellProfile::constant(double K) {
    if (!std::isfinite(K)) fail(ErrorKind::data, "curvature must be finite");
    ShellProfile s;
    s.kind_ = Kind::constant;
    s.K_ = K;
    s.height_known_ = K == 0.0;
    s.sign_ = classify(K, K);
    return s;
}

ShellProfile ShellProfile::paraboloid(double k1, double k2, Point2 center) {
    if (!std::isfinite(k1) || !std::isfinite(k2)) fail(ErrorKind::data, "principal curvatures must be finite");
    ShellProfile s;
    s.kind_ = Kind::paraboloid;
    s.k1_ = k1;
    s.k2_ = k2;
    s.K_ = k1 * k2;
    s.center_ = center;
    s.height_known_ = true;
    s.sign_ = classify(s.K_, s.K_);
    return s;
}

ShellProfile ShellProfile::sampled(Box box, int nx, int ny, std::vector<double> values) {
    if (nx < 2 || ny < 2) fail(ErrorKind::data, "curvature lattice needs at least 2x2 nodes");
    if (values.size() != static_cast<std::size_t>(nx) * ny) fail(ErrorKind::data, "curvature lattice size mismatch");
    if (!(box.width() > 0.0) || !(box.height() > 0.0)) fail(ErrorKind::data, "curvature lattice box is empty");
    double lo = values[0], hi = values[0];
    for (double v : values) {
        if (!std::isfinite(v)) fail(ErrorKind::data, "curvature sample is not finite");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    ShellProfile s;
    s.kind_ = Kind::sampled;
    s.box_ = box;
    s.nx_ = nx;
    s.ny_ = ny;
    s.values_ = std::move(values);
    s.sign_ = classify(lo, hi);
    return s;
}

ShellProfile ShellProfile::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::data, "cannot open curvature file " + path);
    std::string line;
    std::getline(in, line);
    std::map<std::pair<double, double>, double> samples;
    std::vector<double> xs, ys;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double x, y, k;
        if (!(row >> x >> y >> k)) fail(ErrorKind::data, path + ":" + std::to_string(lineno) + ": expected x,y,K");
        samples[{y, x}] = k;
        xs.push_back(x);
        ys.push_back(y);
    }
    auto uniq = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    };
    xs = uniq(xs);
    ys = uniq(ys);
    if (xs.size() < 2 || ys.size() < 2 || samples.size() != xs.size() * ys.size())
        fail(ErrorKind::data, path + ": samples do not form a full lattice");
    auto regular = [](const std::vector<double>& v) {
        const double h = (v.back() - v.front()) / (v.size() - 1);
        for (std::size_t i = 0; i < v.size(); ++i)
            if (std::abs(v[i] - (v.front() + i * h)) > 1e-9 * (1.0 + std::abs(h))) return false;
        return true;
    };
    if (!regular(xs) || !regular(ys)) fail(ErrorKind::data, path + ": lattice is not regular");
    std::vector<double> vals;
    vals.reserve(samples.size());
    for (const auto& [key, k] : samples) vals.push_back(k);
    return sampled({{xs.front(), ys.front()}, {xs.back(), ys.back()}}, static_cast<int>(xs.size()),
                   static_cast<int>(ys.size()), std::move(vals));
}

double ShellProfile::curvature(Point2 x) const {
    if (kind_ != Kind::sampled) return K_;
    const double fx = std::clamp((x.x - box_.lo.x) / box_.width() * (nx_ - 1), 0.0, nx_ - 1.0);
    const double fy = std::clamp((x.y - box_.lo.y) / box_.height() * (ny_ - 1), 0.0, ny_ - 1.0);
    const int i = std::min(static_cast<int>(fx), nx_ - 2);
    const int j = std::min(static_cast<int>(fy), ny_ - 2);
    const double u = fx - i, v = fy - j;
    auto at = [&](int a, int b) { return values_[static_cast<std::size_t>(b) * nx_ + a]; };
    return (1 - u) * (1 - v) * at(i, j) + u * (1 - v) * at(i + 1, j) + (1 - u) * v * at(i, j + 1) +
           u * v * at(i + 1, j + 1);
}

double ShellProfile::max_abs_curvature() const {
    if (kind_ != Kind::sampled) return std::abs(K_);
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

bool ShellProfile::has_height() const { return height_known_; }

double ShellProfile::height(Point2 x) const {
    if (!height_known_) fail(ErrorKind::data, "shell height is unknown for this profile");
    const Vec2 d = x - center_;
    return 0.5 * (k1_ * d.x * d.x + k2_ * d.y * d.y);
}

Vec2 ShellProfile::height_gradient(Point2 x) const {
    if (!height_known_) fail(ErrorKind::data, "shell height is unknown for this profile");
    const Vec2 d = x - center_;
    return {k1_ * d.x, k2_ * d.y};
}

Sym2 ShellProfile::height_hessian(Point2) const {
    if (!height_known_) fail(ErrorKind::data, "shell height is unknown for this profile");
    return {k1_, 0.0, k2_};
}

std::string ShellProfile::describe() const {
    std::ostringstream os;
    os.precision(12);
    switch (kind_) {
        case Kind::constant: os << "constant(K=" << K_ << ")"; break;
        case Kind::paraboloid: os << "paraboloid(k1=" << k1_ << ", k2=" << k2_ << ")"; break;
        case Kind::sampled: os << "sampled(" << nx_ << "x" << ny_ << ")"; break;
    }
    return os.str();
}

}  // namespace wrinkle
