#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "wrinkle/field.hpp"
#include "wrinkle/geometry.hpp"

namespace wrinkle {

// one-periodic, A(0) = 0, slope l2/2 on [0, theta), -l1/2 on [theta, 1)
double profile_A(double t, double l1, double l2);
double profile_A_prime(double t, double l1, double l2);
inline double profile_W(double t) { return std::sqrt(2.0) * std::cos(t); }
inline double profile_W_prime(double t) { return -std::sqrt(2.0) * std::sin(t); }
inline double profile_W_second(double t) { return -std::sqrt(2.0) * std::cos(t); }
inline double profile_V(double t) { return 0.5 * std::sin(2.0 * t); }
inline double profile_V_prime(double t) { return std::cos(2.0 * t); }

// quintic smoothstep on [0, 1], clamped outside
double smoothstep5(double s);
// 0 for d <= delta/2, 1 for d >= delta
double cutoff(double d, double delta);

struct TargetDefect {
    Sym2 mu{};
    Eigen2 eig{};
    double theta = 0.0;  // lambda1 / (lambda1 + lambda2), 0 for rank one

    // symmetric positive semidefinite; round-off negatives are clipped
    static TargetDefect from(const Sym2& mu);
    double trace() const { return eig.lambda1 + eig.lambda2; }
    bool rank_one() const { return theta == 0.0; }
};

struct HerringboneParams {
    double l_wr = 0.01;
    double l_sh = 0.0631;
    double l_avg = 0.398;
    double delta_int = 0.01;
    double delta_ext = 0.0631;

    void validate() const;
};

// l_wr = (b/k)^(1/4), l_avg = l_wr^(1/5), l_sh = sqrt(l_wr l_avg), delta_int = l_wr,
// delta_ext = l_sh. ratio = lambda / Lambda of the target; 0 for rank-one
// targets, which carry no internal walls and skip the internal-wall inequality.
HerringboneParams optimal_params(double b, double k, double ratio = 1.0);
HerringboneParams optimal_params(double b, double k, const TargetDefect& mu);

void check_single(const HerringboneParams& p, const TargetDefect& mu);
void check_piecewise(const HerringboneParams& p, double ratio);

// Shear bands plus twinned wrinkles for a constant target, in coordinates
// relative to origin.
class Herringbone final : public FieldSource {
public:
    Herringbone(TargetDefect mu, HerringboneParams p, Point2 origin = {});

    FieldValue at(Point2 x) const override;
    double finest_scale() const override { return p_.l_wr; }

    const TargetDefect& target() const { return mu_; }
    const HerringboneParams& params() const { return p_; }
    Vec2 band_normal() const { return n_; }
    // distance to the jump set of the wrinkle direction, infinite without jumps
    double jump_distance(Point2 x) const;
    Vec2 wrinkle_direction(Point2 x) const;
    bool bulk(Point2 x) const { return jump_distance(x) >= p_.delta_int; }

private:
    TargetDefect mu_;
    HerringboneParams p_;
    Point2 origin_;
    Vec2 n_{}, s_{};  // (eta2 - eta1)/sqrt2 and eta2 + eta1
    bool jumps_ = false;
};

using TargetFunction = std::function<std::optional<Sym2>(Point2)>;

// Lattice of l_avg squares from the lower-left corner of the bounding box,
// one herringbone per square for the averaged target, glued by cutoffs.
class PiecewiseHerringbone final : public FieldSource {
public:
    PiecewiseHerringbone(const Domain& domain, const TargetFunction& mu, HerringboneParams p,
                         int average_samples = 32, bool check = true);

    FieldValue at(Point2 x) const override;
    double finest_scale() const override { return p_.l_wr; }

    const HerringboneParams& params() const { return p_; }
    int cols() const { return nx_; }
    int rows() const { return ny_; }
    Box square(int i, int j) const;
    const Herringbone& piece(int i, int j) const { return pieces_[static_cast<std::size_t>(j) * nx_ + i]; }
    // square containing x (clamped to the lattice)
    std::pair<int, int> locate(Point2 x) const;
    double external_cutoff(Point2 x) const;
    double edge_distance(Point2 x) const;
    bool bulk(Point2 x) const;
    Sym2 averaged_target(Point2 x) const;
    // eigenvalue bounds of the averaged targets over non-empty squares
    double lambda_min() const { return lmin_; }
    double lambda_max() const { return lmax_; }
    double ratio() const { return lmax_ > 0.0 ? lmin_ / lmax_ : 0.0; }

private:
    Box box_;
    HerringboneParams p_;
    int nx_ = 0, ny_ = 0;
    std::vector<Herringbone> pieces_;
    double lmin_ = 0.0, lmax_ = 0.0;
};

// node samples on the square grid with spacing h covering box
DisplacementField herringbone(Box square, const TargetDefect& mu, const HerringboneParams& p, double h);
DisplacementField piecewise_herringbone(const Domain& domain, const TargetFunction& mu,
                                        const HerringboneParams& p, double h);

struct HerringboneReport {
    double h = 0.0;
    int samples = 0;
    int bulk_samples = 0;
    // max |e(v) + grad w (x) grad w / 2 - <mu>/2| where the stencil stays in the bulk
    double bulk_strain_max = 0.0;
    double internal_wall_fraction = 0.0;
    double external_wall_fraction = 0.0;
    double sup_v = 0.0, sup_grad_v = 0.0, sup_w = 0.0, sup_grad_w = 0.0, sup_hess_w = 0.0;
    // sup norms divided by the predicted scales (b/k)^(3/20) tr, tr, sqrt(tr) l_wr,
    // sqrt(tr), sqrt(tr) / l_wr, with tr the largest averaged trace
    double c_v = 0.0, c_grad_v = 0.0, c_w = 0.0, c_grad_w = 0.0, c_hess_w = 0.0;
};

// Centred-difference diagnostics at every stride-th node of the h lattice inside the domain.
HerringboneReport inspect(const PiecewiseHerringbone& field, const Domain& domain, double h, int stride = 1);

}  // namespace wrinkle
