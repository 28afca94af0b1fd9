#include <cmath>
#include <random>

#include "doctest.h"
#include "wrinkle/airy.hpp"
#include "wrinkle/error.hpp"

using namespace wrinkle;

namespace {

// min over chords through x of the linear interpolant of |y|^2/2, with the
// chord ends found by bisection on contains()
double chord_oracle(const Domain& d, Point2 x, int angles = 4000) {
    auto exit = [&](Vec2 e) {
        double lo = 0.0, hi = d.diameter();
        for (int i = 0; i < 80; ++i) {
            const double m = 0.5 * (lo + hi);
            (d.contains(x + m * e) ? lo : hi) = m;
        }
        return lo;
    };
    double best = INFINITY;
    for (int k = 0; k < angles; ++k) {
        const Vec2 e = unit(pi * k / angles);
        const double t1 = exit(e), t2 = exit(-e);
        const Point2 p = x + t1 * e, q = x - t2 * e;
        const double v = (t2 * 0.5 * norm2(p) + t1 * 0.5 * norm2(q)) / (t1 + t2);
        best = std::min(best, v);
    }
    return best;
}

// min over triangles of boundary samples containing x
double triple_oracle(const std::vector<Point2>& s, Point2 x) {
    double best = INFINITY;
    const std::size_t n = s.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                const double D = cross(s[j] - s[i], s[k] - s[i]);
                if (std::abs(D) < 1e-14) continue;
                const double l1 = cross(s[j] - x, s[k] - x) / D, l2 = cross(s[k] - x, s[i] - x) / D,
                             l3 = 1.0 - l1 - l2;
                if (l1 < -1e-12 || l2 < -1e-12 || l3 < -1e-12) continue;
                best = std::min(best, 0.5 * (l1 * norm2(s[i]) + l2 * norm2(s[j]) + l3 * norm2(s[k])));
            }
    return best;
}

}  // namespace

TEST_CASE("phi_plus on smooth shapes matches the chord minimiser") {
    const std::vector<Domain> shapes{Domain::ellipse(2.0, 1.0, {0.2, 0.1}), Domain::disc(1.0, {0.5, 0.0}),
                                     Domain::half_disc(1.0, {0.0, 1.0}, pi / 2)};
    std::mt19937 rng(3);
    for (const Domain& d : shapes) {
        const Box b = d.bounding_box();
        std::uniform_real_distribution<double> X(b.lo.x, b.hi.x), Y(b.lo.y, b.hi.y);
        int n = 0;
        while (n < 15) {
            const Point2 x{X(rng), Y(rng)};
            if (!d.contains(x) || d.boundary_distance(x) < 1e-3) continue;
            ++n;
            CHECK(std::abs(phi_plus(d, x) - chord_oracle(d, x)) < 2e-6);
        }
    }
}

TEST_CASE("phi_plus on the rectangle matches the triple minimiser") {
    const Domain d = Domain::rectangle(2.0, 1.0);
    std::vector<Point2> s{{2, 1}, {-2, 1}, {-2, -1}, {2, -1}};
    for (int i = 1; i < 16; ++i) {
        const double t = -2.0 + 4.0 * i / 16, u = -1.0 + 2.0 * i / 16;
        s.push_back({t, 1.0});
        s.push_back({t, -1.0});
        s.push_back({2.0, u});
        s.push_back({-2.0, u});
    }
    // grid-aligned probes, so every optimal simplex is spanned by samples
    for (Point2 x : {Point2{0.0, 0.0}, Point2{0.5, 0.25}, Point2{1.5, 0.0}, Point2{1.75, 0.75}, Point2{-1.25, -0.5}})
        CHECK(std::abs(phi_plus(d, x) - triple_oracle(s, x)) < 1e-12);
}

TEST_CASE("phi_plus traces the boundary data and is convex") {
    const Domain d = Domain::ellipse(2.0, 1.0);
    for (const BoundaryPoint& b : d.boundary_sample(64))
        CHECK(phi_plus(d, b.position) == doctest::Approx(0.5 * norm2(b.position)).epsilon(1e-9));
    const Point2 p{-1.2, 0.3}, q{1.0, -0.4};
    for (int i = 1; i < 10; ++i) {
        const double t = i / 10.0;
        CHECK(phi_plus(d, (1 - t) * p + t * q) <= (1 - t) * phi_plus(d, p) + t * phi_plus(d, q) + 1e-12);
    }
}

TEST_CASE("phi_minus and admissibility") {
    const Domain d = Domain::disc(1.0);
    CHECK(phi_minus(d, {0.0, 0.0}) == doctest::Approx(-0.5));
    CHECK(phi_minus(d, {0.6, 0.0}) == doctest::Approx(0.18 - 0.08));
    CHECK(check_admissible(plus_field(d), d, 1e-8).admissible(1e-8));
    CHECK(check_admissible(minus_field(Domain::rectangle(2.0, 1.0)), Domain::rectangle(2.0, 1.0), 1e-8)
              .admissible(1e-8));
}

TEST_CASE("generic convex roof agrees with the closed form") {
    const Domain d = Domain::ellipse(2.0, 1.0);
    const ConvexRoof roof(d, 512);
    for (Point2 x : {Point2{0.0, 0.0}, Point2{1.0, 0.5}, Point2{-1.5, -0.2}})
        CHECK(std::abs(roof(x) - phi_plus(d, x)) < 5e-4);
}

TEST_CASE("phi_plus errors") {
    const Domain pent = Domain::convex_polygon({{0, 0}, {2, 0}, {2.5, 1}, {1, 2.5}, {-0.5, 1}});
    if (!has_plus_closed_form(pent)) CHECK_THROWS_AS(phi_plus(pent, {1.0, 1.0}), Error);
    CHECK_THROWS_AS(phi_plus(Domain::disc(1.0), {2.0, 0.0}), Error);
}

TEST_CASE("dual value for constant curvature") {
    const Domain d = Domain::disc(1.0);
    const double v = dual_value(d, ShellProfile::constant(1.0), solve_dual(d, ShellProfile::constant(1.0)), {128, 128});
    CHECK(v == doctest::Approx(pi / 4).epsilon(2e-3));
    const double w =
        dual_value(d, ShellProfile::constant(-1.0), solve_dual(d, ShellProfile::constant(-1.0)), {128, 128});
    CHECK(w == doctest::Approx(pi / 12).epsilon(2e-3));
}
