#include <cmath>
#include <random>

#include "doctest.h"
#include "wrinkle/error.hpp"
#include "wrinkle/herringbone.hpp"

using namespace wrinkle;

namespace {

// e(u) + grad w (x) grad w / 2 by fourth-order central differences
Sym2 membrane_strain(const FieldSource& f, Point2 x, double h) {
    auto d = [&](Vec2 e) {
        const FieldValue a = f.at(x - 2 * h * e), b = f.at(x - h * e), c = f.at(x + h * e), g = f.at(x + 2 * h * e);
        return std::pair{(a.u - 8.0 * b.u + 8.0 * c.u - g.u) / (12.0 * h), (a.w - 8 * b.w + 8 * c.w - g.w) / (12.0 * h)};
    };
    const auto [ux, wx] = d({1, 0});
    const auto [uy, wy] = d({0, 1});
    return Sym2{ux.x, 0.5 * (ux.y + uy.x), uy.y} + 0.5 * outer(Vec2{wx, wy});
}

}  // namespace

TEST_CASE("profile functions") {
    CHECK(profile_A(0.25, 1.0, 1.0) == doctest::Approx(0.125));
    CHECK(profile_A(1.0, 1.0, 3.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(profile_A(0.0, 2.0, 5.0) == 0.0);
    CHECK(profile_A(1.3, 1.0, 3.0) == doctest::Approx(profile_A(0.3, 1.0, 3.0)));
    // theta = l1 / (l1 + l2) = 0.25: slope l2/2 before, -l1/2 after
    CHECK(profile_A_prime(0.1, 1.0, 3.0) == doctest::Approx(1.5));
    CHECK(profile_A_prime(0.6, 1.0, 3.0) == doctest::Approx(-0.5));
    CHECK(profile_V(pi / 4) == doctest::Approx(0.5));
    // V' + W'^2 = 1 is what makes a single wrinkle strain-free
    for (double t : {0.1, 0.7, 2.0})
        CHECK(profile_V_prime(t) + profile_W_prime(t) * profile_W_prime(t) == doctest::Approx(1.0));
}

TEST_CASE("cutoff") {
    CHECK(cutoff(0.0, 0.2) == 0.0);
    CHECK(cutoff(0.1, 0.2) == 0.0);
    CHECK(cutoff(0.2, 0.2) == 1.0);
    CHECK(cutoff(0.5, 0.2) == 1.0);
    CHECK(cutoff(0.15, 0.2) == doctest::Approx(0.5));
    CHECK(smoothstep5(0.25) == doctest::Approx(6 * std::pow(0.25, 5) - 15 * std::pow(0.25, 4) + 10 * std::pow(0.25, 3)));
}

TEST_CASE("optimal parameters") {
    const HerringboneParams p = optimal_params(1e-8, 1.0, 0.0);
    CHECK(p.l_wr == doctest::Approx(0.01));
    CHECK(p.l_avg == doctest::Approx(std::pow(0.01, 0.2)));
    CHECK(p.l_sh == doctest::Approx(std::sqrt(0.01 * std::pow(0.01, 0.2))));
    CHECK(p.delta_int == doctest::Approx(p.l_wr));
    CHECK(p.delta_ext == doctest::Approx(p.l_sh));
    CHECK_THROWS_AS(optimal_params(-1.0, 1.0), Error);
    CHECK_THROWS_AS(optimal_params(2.0, 1.0), Error);
    CHECK_THROWS_AS(optimal_params(1e-8, 1.0, 1.5), Error);
    HerringboneParams bad;
    bad.l_wr = 0.0;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("target defects") {
    const TargetDefect iso = TargetDefect::from(identity2());
    CHECK(iso.theta == doctest::Approx(0.5));
    CHECK(iso.trace() == doctest::Approx(2.0));
    const TargetDefect r1 = TargetDefect::from(outer(unit(0.3)));
    CHECK(r1.rank_one());
    CHECK_THROWS_AS(TargetDefect::from(Sym2{1.0, 0.0, -0.5}), Error);
}

TEST_CASE("rank-one herringbone has zero membrane strain") {
    const Sym2 mu = 0.7 * outer(unit(0.4));
    const HerringboneParams p = optimal_params(1e-8, 1.0, 0.0);
    const Herringbone hb(TargetDefect::from(mu), p);
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> U(-0.3, 0.3);
    for (int i = 0; i < 50; ++i) {
        const Sym2 e = membrane_strain(hb, {U(rng), U(rng)}, p.l_wr / 64) - 0.5 * mu;
        CHECK(frobenius(e) < 1e-6);
    }
}

TEST_CASE("twinned herringbone matches the target in the bulk") {
    const Sym2 mu{1.0, 0.2, 0.6};
    const TargetDefect t = TargetDefect::from(mu);
    HerringboneParams p = optimal_params(1e-8, 1.0, 0.0);
    const Herringbone hb(t, p);
    const double h = p.l_wr / 64;
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> U(-0.3, 0.3);
    int bulk = 0;
    for (int i = 0; i < 400; ++i) {
        const Point2 x{U(rng), U(rng)};
        if (hb.jump_distance(x) < p.delta_int + 3 * h) continue;
        ++bulk;
        CHECK(frobenius(membrane_strain(hb, x, h) - 0.5 * mu) < 1e-6);
    }
    CHECK(bulk > 50);
}
