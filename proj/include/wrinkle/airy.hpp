#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wrinkle/geometry.hpp"
#include "wrinkle/grid.hpp"
#include "wrinkle/shell.hpp"

namespace wrinkle {

enum class AirySign { plus, minus };
const char* to_string(AirySign s);

// Absolutely continuous Hessian part. For rank <= 1 it equals zeta eta (x) eta;
// the full matrix is always available.
struct HessianAC {
    Sym2 matrix{};
    double zeta = 0.0;
    Vec2 eta{1.0, 0.0};
    int rank = 0;
};

class AiryModel {
public:
    virtual ~AiryModel() = default;
    virtual std::string name() const = 0;
    virtual double value(Point2 x) const = 0;
    virtual Vec2 gradient(Point2 x) const = 0;
    virtual HessianAC hessian(Point2 x) const = 0;
};

// Optimal Airy potential on a domain, extended by |x|^2/2 outside.
class AiryField {
public:
    AiryField(Domain domain, AirySign sign, std::shared_ptr<const AiryModel> model);

    static AiryField identity(const Domain& domain);

    AirySign sign() const { return sign_; }
    const Domain& domain() const { return domain_; }
    std::string model() const { return model_->name(); }
    const AiryModel& impl() const { return *model_; }

    double operator()(Point2 x) const;
    // one-sided from the interior on the boundary
    Vec2 gradient(Point2 x) const;
    HessianAC hessian_ac(Point2 x) const;

    // The singular Hessian part lives on the medial axis for the minus sign.
    bool has_singular_part() const { return sign_ == AirySign::minus; }
    const MedialAxis& singular_support() const { return domain_.medial_axis(); }
    // density |y1 - y2| of the singular part at a point of the medial axis
    double singular_density(Point2 x) const;

private:
    Domain domain_;
    AirySign sign_;
    std::shared_ptr<const AiryModel> model_;
};

double phi_minus(const Domain& domain, Point2 x);
// closed forms for disc, ellipse, half disc, rectangle and tangential polygons
double phi_plus(const Domain& domain, Point2 x);
bool has_plus_closed_form(const Domain& domain);

struct Incircle {
    Point2 center{};
    double radius = 0.0;
};
// incircle touching every side, if the polygon has one
std::optional<Incircle> incircle(const Domain& domain);

// Convex envelope of |y|^2/2 over n boundary samples, evaluated exactly by a
// pivoting walk over triangles of samples that contain x.
class ConvexRoof {
public:
    ConvexRoof(const Domain& domain, int n);
    double operator()(Point2 x) const;
    int samples() const { return static_cast<int>(pts_.size()); }

private:
    Domain domain_;
    std::vector<Point2> pts_;
    std::vector<double> f_;
};

double phi_plus_generic(const Domain& domain, Point2 x, int n = 512);

AiryField plus_field(const Domain& domain);
AiryField minus_field(const Domain& domain);
AiryField solve_dual(const Domain& domain, const ShellProfile& shell);

// integral of (phi - |x|^2/2) K over the domain
double dual_value(const Domain& domain, const ShellProfile& shell, const AiryField& airy, GridSpec grid);

struct AdmissibilityReport {
    double trace_max_violation = 0.0;
    double convexity_max_violation = 0.0;
    double jump_min = 0.0;
    int boundary_samples = 0;
    int pairs = 0;
    bool admissible(double tol) const {
        return trace_max_violation <= tol && convexity_max_violation <= tol && jump_min >= -tol;
    }
};

AdmissibilityReport check_admissible(const AiryField& airy, const Domain& domain, double tol = 1e-9);

}  // namespace wrinkle
