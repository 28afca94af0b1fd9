#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "wrinkle/airy.hpp"
#include "wrinkle/grid.hpp"
#include "wrinkle/shell.hpp"
#include "wrinkle/stablelines.hpp"

namespace wrinkle {

using LineFunction = std::function<double(double)>;

// lambda on uniform samples t_i = i L / (n - 1)
struct LineSolution {
    StableLine line;
    std::vector<double> lambda;
    DataKind data_kind = DataKind::two_point_bvp;
    bool sign_violation = false;
    // (rho lambda)' at both ends, with rho as passed to the solver
    double flux_start = 0.0, flux_end = 0.0;
    double rho_start = 1.0, rho_end = 1.0;

    double length() const { return line.length(); }
    double step() const { return length() / static_cast<double>(lambda.size() - 1); }
    double t_at(std::size_t i) const { return static_cast<double>(i) * step(); }
    double lambda_at(double t) const;
    // at relative position tau = t / L
    double lambda_at_relative(double tau) const;
    double min_lambda() const;
};

// -(rho lambda)'' / (2 rho) = K with rho lambda = 0 at both ends
LineSolution solve_bvp(const StableLine& line, const LineFunction& rho, const LineFunction& K, int samples = 2000);
// same ODE with rho lambda = (rho lambda)' = 0 at the start
LineSolution solve_cauchy(const StableLine& line, const LineFunction& rho, const LineFunction& K, int samples = 2000);

// Line measure lambda H^1 on a segment with direction eta (x) eta.
struct SingularLine {
    Point2 a{}, b{};
    Vec2 eta{1.0, 0.0};
    std::vector<double> lambda;  // uniform samples from a to b

    double length() const { return norm(b - a); }
    double lambda_at(double sigma) const;
    double mass() const;
};

struct DefectOptions {
    GridSpec grid{256, 256};
    double spacing = 0.0;   // 0: one line per grid step
    int line_samples = 0;   // 0: max(2000, 4 max(nx, ny))
    UDecomposition u{};
};

struct DefectComponent {
    double weight = 1.0;
    StableLineFamily family;
    std::vector<LineSolution> solutions;
    std::vector<SingularLine> singular;
    // per (group, sub): solution indices sorted by s
    std::vector<std::vector<std::vector<std::pair<double, std::size_t>>>> index;
};

class DefectField {
public:
    DefectField(Domain domain, ShellProfile shell, AiryField airy, DefectOptions opts,
                std::vector<DefectComponent> parts);

    const Domain& domain() const { return domain_; }
    const ShellProfile& shell() const { return shell_; }
    const AiryField& airy() const { return airy_; }
    const DefectOptions& options() const { return opts_; }
    const std::vector<DefectComponent>& components() const { return *parts_; }
    const MaskedGrid& grid() const { return grid_; }

    // nullopt outside the domain or away from every sampled line
    std::optional<double> lambda_at(Point2 x) const;
    std::optional<Sym2> mu_at(Point2 x) const;
    // eta of the first component; zero vector where undefined
    Vec2 eta_at(Point2 x) const;

    // values at grid cell centres (NaN outside the domain or uncovered)
    const std::vector<double>& lambda_grid() const { return lambda_; }
    const std::vector<Vec2>& eta_grid() const { return eta_; }
    int uncovered() const { return uncovered_; }
    double min_lambda() const;
    bool sign_violation() const;

    double primal() const { return primal_; }
    double scale() const { return scale_; }
    // the same field with lambda multiplied by s
    DefectField scaled(double s) const;

private:
    void rasterize();
    Domain domain_;
    ShellProfile shell_;
    AiryField airy_;
    DefectOptions opts_;
    std::shared_ptr<const std::vector<DefectComponent>> parts_;
    MaskedGrid grid_;
    std::vector<double> lambda_;
    std::vector<Vec2> eta_;
    int uncovered_ = 0;
    double primal_ = 0.0;
    double scale_ = 1.0;
};

DefectField defect_field(const Domain& domain, const ShellProfile& shell, const DefectOptions& opts = {});
// half the integral of lambda, including line measures
double primal_value(const DefectField& defect);

struct ResidualReport {
    double max_residual = 0.0;
    double k_l1 = 0.0;  // integral of |K|
    int tests = 0;
    double radius = 0.0;
    std::vector<double> residuals;
};

// max over interior bumps psi of | -1/2 int <perp perp psi, mu> - int psi K |
ResidualReport curlcurl_residual(const DefectField& defect, const ShellProfile& shell, int test_count = 8);

}  // namespace wrinkle
