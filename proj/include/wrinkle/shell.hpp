#pragma once

#include <string>
#include <vector>

#include "wrinkle/vec.hpp"

namespace wrinkle {

enum class CurvatureSign { zero, positive, negative, mixed };
const char* to_string(CurvatureSign s);

// Gaussian curvature K = det(grad grad p) of the shell, with the height p when known.
class ShellProfile {
public:
    enum class Kind { constant, paraboloid, sampled };

    static ShellProfile flat();
    static ShellProfile constant(double K);
    // p = (k1 (x - c)_1^2 + k2 (x - c)_2^2) / 2
    static ShellProfile paraboloid(double k1, double k2, Point2 center = {});
    // K on a regular node lattice covering box, row-major with x fastest; bilinear in between
    static ShellProfile sampled(Box box, int nx, int ny, std::vector<double> values);
    // CSV with header x,y,K on a regular lattice
    static ShellProfile from_csv(const std::string& path);

    Kind kind() const { return kind_; }
    double curvature(Point2 x) const;
    CurvatureSign sign() const { return sign_; }
    bool is_constant() const { return kind_ != Kind::sampled; }
    double max_abs_curvature() const;

    bool has_height() const;
    double height(Point2 x) const;
    Vec2 height_gradient(Point2 x) const;
    Sym2 height_hessian(Point2 x) const;

    std::string describe() const;

private:
    Kind kind_ = Kind::constant;
    double K_ = 0.0;
    double k1_ = 0.0, k2_ = 0.0;
    bool height_known_ = false;
    Point2 center_{};
    Box box_{};
    int nx_ = 0, ny_ = 0;
    std::vector<double> values_;
    CurvatureSign sign_ = CurvatureSign::zero;
};

}  // namespace wrinkle
