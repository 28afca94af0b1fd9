#include <cmath>

#include "doctest.h"
#include "wrinkle/characteristics.hpp"
#include "wrinkle/error.hpp"

using namespace wrinkle;

namespace {

StableLine segment(Point2 a, Point2 b) {
    StableLine l;
    l.start = a;
    l.end = b;
    l.eta = -perp(normalized(b - a));
    return l;
}

// RK4 for g'' = -2 rho K with g(0) = 0, g'(0) = s
double shoot(const LineFunction& rho, const LineFunction& K, double s, double t_end, int n = 4000) {
    double g = 0.0, v = s;
    const double h = t_end / n;
    auto acc = [&](double t) { return -2.0 * rho(t) * K(t); };
    for (int i = 0; i < n; ++i) {
        const double t = i * h;
        const double k1g = v, k1v = acc(t);
        const double k2g = v + 0.5 * h * k1v, k2v = acc(t + 0.5 * h);
        const double k3g = v + 0.5 * h * k2v, k3v = acc(t + 0.5 * h);
        const double k4g = v + h * k3v, k4v = acc(t + h);
        g += h / 6.0 * (k1g + 2 * k2g + 2 * k3g + k4g);
        v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    }
    return g;
}

}  // namespace

TEST_CASE("two-point problem with constant data") {
    const StableLine l = segment({0, 0}, {2, 0});
    const auto sol = solve_bvp(l, [](double) { return 1.0; }, [](double) { return 1.0; });
    for (double t : {0.25, 1.0, 1.7}) CHECK(sol.lambda_at(t) == doctest::Approx(t * (2.0 - t)).epsilon(1e-6));
    CHECK(sol.lambda_at(0.0) == doctest::Approx(0.0));
    CHECK_FALSE(sol.sign_violation);
}

TEST_CASE("two-point problem against shooting") {
    const StableLine l = segment({0, 1}, {0, 2});
    const LineFunction rho = [](double t) { return 1.0 + t; };
    const LineFunction K = [](double t) { return 1.0 + 0.5 * std::sin(3.0 * t); };
    const double g0 = shoot(rho, K, 0.0, 1.0), g1 = shoot(rho, K, 1.0, 1.0);
    const double s = -g0 / (g1 - g0);
    const auto sol = solve_bvp(l, rho, K, 4000);
    for (double t : {0.2, 0.5, 0.8}) CHECK(std::abs(sol.lambda_at(t) - shoot(rho, K, s, t) / rho(t)) < 1e-6);
}

TEST_CASE("Cauchy problem and the sign rule") {
    StableLine l = segment({0, 0}, {1, 0});
    l.start_kind = EndKind::focal_point;
    const LineFunction rho = [](double t) { return 1.0 + t; };
    const auto neg = solve_cauchy(l, rho, [](double) { return -1.0; });
    for (double t : {0.3, 0.9}) CHECK(neg.lambda_at(t) == doctest::Approx((t * t + t * t * t / 3.0) / (1.0 + t)).epsilon(1e-6));
    CHECK_FALSE(neg.sign_violation);
    CHECK(solve_cauchy(l, rho, [](double) { return 1.0; }).sign_violation);
}

TEST_CASE("line solver input checks") {
    const StableLine l = segment({0, 0}, {1, 0});
    CHECK_THROWS_AS(solve_bvp(l, [](double) { return 1.0; }, [](double) { return 1.0; }, 2), Error);
    CHECK_THROWS_AS(solve_bvp(l, [](double t) { return t - 0.5; }, [](double) { return 1.0; }), Error);
    CHECK_THROWS_AS(solve_bvp(segment({0, 0}, {0, 0}), [](double) { return 1.0; }, [](double) { return 1.0; }), Error);
}

TEST_CASE("stable lines are unit-eta segments inside the domain") {
    const Domain d = Domain::ellipse(2.0, 1.0);
    const auto fam = stable_lines(d, plus_field(d), 0.05);
    REQUIRE_FALSE(fam.empty());
    for (const StableLine& l : fam.lines) {
        CHECK(norm(l.eta) == doctest::Approx(1.0));
        CHECK(std::abs(dot(l.eta, l.end - l.start)) < 1e-9 * d.diameter());
        CHECK(d.contains(0.5 * (l.start + l.end)));
    }
}

TEST_CASE("defect fields reproduce the primal values") {
    DefectOptions o;
    o.grid = {128, 128};
    {
        const Domain d = Domain::ellipse(2.0, 1.0);
        const auto f = defect_field(d, ShellProfile::constant(1.0), o);
        CHECK(f.primal() == doctest::Approx(pi / 2).epsilon(1e-3));
        CHECK(f.min_lambda() >= -1e-10);
        // vertical chords: lambda = b^2 (1 - x^2/a^2) - y^2
        CHECK(*f.lambda_at({1.0, 0.2}) == doctest::Approx(0.75 - 0.04).epsilon(1e-3));
        const auto r = curlcurl_residual(f, ShellProfile::constant(1.0), 4);
        CHECK(r.max_residual < 1e-3 * r.k_l1);
    }
    {
        const Domain d = Domain::disc(1.0);
        const auto f = defect_field(d, ShellProfile::constant(-1.0), o);
        CHECK(f.primal() == doctest::Approx(pi / 12).epsilon(1e-3));
        // radial lines with Cauchy data at the centre and rho = r
        const LineFunction rho = [](double t) { return t; };
        const double g = shoot(rho, [](double) { return -1.0; }, 0.0, 0.5);
        CHECK(std::abs(*f.lambda_at({0.5, 0.0}) - g / 0.5) < 1e-3);
    }
}

TEST_CASE("mixed curvature is unsupported") {
    const Domain d = Domain::disc(1.0);
    const auto mixed = ShellProfile::sampled({{-1, -1}, {1, 1}}, 2, 2, {1.0, -1.0, 1.0, -1.0});
    CHECK_THROWS_AS(defect_field(d, mixed), Error);
}
