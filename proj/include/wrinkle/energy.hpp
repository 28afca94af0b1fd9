#pragma once

#include <functional>
#include <vector>

#include "wrinkle/characteristics.hpp"
#include "wrinkle/field.hpp"
#include "wrinkle/geometry.hpp"
#include "wrinkle/herringbone.hpp"
#include "wrinkle/shell.hpp"

namespace wrinkle {

struct EnergyParams {
    double b = 1e-8;
    double k = 1.0;
    double gamma = 0.0;

    double gamma_eff() const { return 2.0 * std::sqrt(b * k) + gamma; }
    void validate() const;
};

struct EnergyBreakdown {
    double stretching = 0.0;
    double bending = 0.0;
    double substrate = 0.0;
    double surface = 0.0;
    double total = 0.0;
};

// What the strain is measured against: grad p (x) grad p with the bending
// reference grad grad p, or a defect target mu with no bending reference.
struct ReferenceValue {
    Sym2 target{};
    Sym2 hessian{};
    double surface_density = 0.0;  // |grad p|^2 / 2 or tr mu / 2
};

struct StrainReference {
    std::function<ReferenceValue(Point2)> at;

    static StrainReference from_shell(const ShellProfile& shell);
    // points where mu is undefined count as mu = 0
    static StrainReference from_defect(TargetFunction mu);
};

struct EnergyReport {
    EnergyBreakdown energy;
    // 1/2 int |eps - gamma I|^2 + gamma/2 int |grad w|^2 + bending + substrate
    double shifted = 0.0;
    double area = 0.0;  // quadrature measure of the domain
    double boundary_flux = 0.0;  // boundary integral of u . nu
    double h = 0.0;
    long long nodes = 0;
};

// Midpoint quadrature on the square lattice of spacing h over the bounding box,
// centred second-order stencils on point samples of the source.
EnergyReport evaluate_energy(const FieldSource& field, const Domain& domain, const StrainReference& ref,
                             const EnergyParams& params, double h);
// same on the node lattice of a sampled field, one-sided stencils on its edge
EnergyReport evaluate_energy(const DisplacementField& field, const Domain& domain, const StrainReference& ref,
                             const EnergyParams& params);

EnergyBreakdown energy(const DisplacementField& field, const Domain& domain, const ShellProfile& shell,
                       const EnergyParams& params);
EnergyBreakdown energy(const FieldSource& field, const Domain& domain, const ShellProfile& shell,
                       const EnergyParams& params, double h);
// energy with the shell's grad p (x) grad p replaced by the target mu
EnergyBreakdown energy_against_target(const FieldSource& field, const Domain& domain, const TargetFunction& mu,
                                      const EnergyParams& params, double h);

struct StrainField {
    Point2 origin{};
    double h = 0.0;
    int nx = 0, ny = 0;
    std::vector<Sym2> eps;
    const Sym2& at(int i, int j) const { return eps[static_cast<std::size_t>(j) * nx + i]; }
};

StrainField strain(const DisplacementField& field, const ShellProfile& shell);

// |primal - dual| / max(|primal|, |dual|), 0 when both vanish
double duality_gap(const Domain& domain, const ShellProfile& shell, GridSpec grid, const DefectOptions& opts = {});

struct ScalarField {
    std::function<double(Point2)> value;
    std::function<Vec2(Point2)> gradient;
    std::function<Sym2(Point2)> hessian;
};

struct InterpolationMargin {
    double lhs = 0.0;              // b int |grad grad w|^2 + k int w^2
    double gradient_term = 0.0;    // 2 sqrt(bk) int |grad w|^2 chi
    double square_term = 0.0;      // int |sqrt(b) lap w + sqrt(k) w|^2 chi
    double chi_gradient_term = 0.0;  // 2 sqrt(bk) |grad chi|_inf |w|_2 |grad w|_2
    double chi_hessian_term = 0.0;   // b |grad grad chi|_inf |grad w|_2^2
    double margin = 0.0;
    double scale = 0.0;  // b |grad grad w|^2 + k |w|^2 in L2, equal to lhs
};

// Midpoint rule with n x n cells on the box; chi must take values in [0, 1]
// and vanish on the box boundary.
InterpolationMargin interpolation_check(const ScalarField& w, const ScalarField& chi, Box box, int n, double b,
                                        double k);

struct ScalingOptions {
    DefectOptions defect{};
    double resolution = 16.0;  // h = l_wr / resolution
    int average_samples = 32;
    bool enforce_regime = true;
};

struct ScalingPoint {
    EnergyParams params;
    HerringboneParams herringbone;
    EnergyBreakdown energy;
    double ratio = 0.0;            // total / gamma_eff
    double wrinkling_ratio = 0.0;  // (bending + substrate) / gamma_eff
    double x = 0.0;                // (b/k)^(1/10)
};

struct ScalingReport {
    std::vector<ScalingPoint> points;
    double primal = 0.0;
    double c1 = 0.0;
    double slope = 0.0;
    std::vector<double> residuals;  // ratio - c1
    double decay_exponent = 0.0;    // of |residual| against (b/k)^(1/10)
    bool residuals_decreasing = false;
};

// sequence ordered towards the limit; regime error unless it stays in the
// asymptotic regime (or enforce_regime is off)
void check_regime(const std::vector<EnergyParams>& seq);
ScalingReport scaling_study(const Domain& domain, const ShellProfile& shell, const std::vector<EnergyParams>& seq,
                            const ScalingOptions& opts = {});

}  // namespace wrinkle
