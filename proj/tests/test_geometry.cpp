#include <cmath>
#include <random>

#include "doctest.h"
#include "wrinkle/error.hpp"
#include "wrinkle/geometry.hpp"

using namespace wrinkle;

namespace {

// dense boundary polyline distance, no use of the library's projections
double brute_distance(const std::vector<Point2>& ring, Point2 x) {
    double best = INFINITY;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        const Point2 a = ring[i], b = ring[(i + 1) % ring.size()];
        const Vec2 d = b - a;
        const double t = std::clamp(dot(x - a, d) / norm2(d), 0.0, 1.0);
        best = std::min(best, norm(x - (a + t * d)));
    }
    return best;
}

std::vector<Point2> ellipse_ring(double a, double b, int n) {
    std::vector<Point2> r;
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * pi * i / n;
        r.push_back({a * std::cos(t), b * std::sin(t)});
    }
    return r;
}

}  // namespace

TEST_CASE("disc distance and containment") {
    const Domain d = Domain::disc(1.5, {0.3, -0.2});
    CHECK(d.contains({0.3, 1.2}));
    CHECK_FALSE(d.contains({0.3, 1.4}));
    CHECK(d.boundary_distance({0.3, -0.2}) == doctest::Approx(1.5));
    CHECK(d.boundary_distance({1.0, 0.0}) == doctest::Approx(1.5 - std::hypot(0.7, 0.2)));
    CHECK(d.area() == doctest::Approx(pi * 2.25));
    CHECK(d.diameter() == doctest::Approx(3.0));
}

TEST_CASE("ellipse distance against a dense polyline") {
    const Domain d = Domain::ellipse(2.0, 1.0);
    const auto ring = ellipse_ring(2.0, 1.0, 200000);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    int n = 0;
    while (n < 200) {
        const Point2 x{2.0 * U(rng), U(rng)};
        if (!d.contains(x)) continue;
        ++n;
        CHECK(std::abs(d.boundary_distance(x) - brute_distance(ring, x)) < 1e-6);
    }
}

TEST_CASE("ellipse perimeter against Simpson quadrature") {
    const double a = 2.0, b = 1.0;
    const int n = 20000;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double t = 2.0 * pi * i / n;
        const double f = std::hypot(a * std::sin(t), b * std::cos(t));
        s += (i == 0 || i == n) ? f : (i % 2 ? 4.0 * f : 2.0 * f);
    }
    s *= 2.0 * pi / n / 3.0;
    CHECK(Domain::ellipse(a, b).perimeter() == doctest::Approx(s).epsilon(1e-8));
}

TEST_CASE("ellipse centre has two nearest points") {
    const Domain d = Domain::ellipse(2.0, 1.0);
    const auto near = d.nearest_boundary_points({0.0, 0.0});
    REQUIRE(near.size() == 2);
    for (const auto& p : near) CHECK(std::abs(std::abs(p.point.y) - 1.0) < 1e-9);
    CHECK(d.nearest_boundary_points({0.5, 0.5}).size() == 1);
}

TEST_CASE("polygon area and containment") {
    const std::vector<Point2> v{{0, 0}, {3, 0}, {4, 2}, {1, 3}};
    const Domain d = Domain::convex_polygon(v);
    double shoelace = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) shoelace += cross(v[i], v[(i + 1) % v.size()]);
    CHECK(d.area() == doctest::Approx(0.5 * shoelace));
    CHECK(d.contains({2, 1}));
    CHECK_FALSE(d.contains({0, 2.5}));
    CHECK(d.is_polygonal());
    CHECK(d.corners().size() == 4);
}

TEST_CASE("rectangle medial axis") {
    const Domain d = Domain::rectangle(2.0, 1.0);
    const MedialAxis& m = d.medial_axis();
    CHECK(m.distance({0.0, 0.0}) < 1e-12);
    CHECK(m.distance({1.5, 0.5}) < 1e-12);
    CHECK(m.distance({0.0, 0.5}) == doctest::Approx(0.5));
    // total length: central segment 2(a - b) plus four diagonals b sqrt 2
    CHECK(m.length() == doctest::Approx(2.0 + 4.0 * std::sqrt(2.0)));
    for (const Point2& p : m.sample(0.05)) CHECK(d.nearest_boundary_points(p, 1e-7).size() >= 2);
}

TEST_CASE("half disc frame") {
    const Domain d = Domain::half_disc(1.0, {0.0, 0.0}, pi / 2);
    CHECK(d.contains({0.0, 0.9}));
    CHECK_FALSE(d.contains({0.0, -0.1}));
    CHECK(d.area() == doctest::Approx(pi / 2));
    CHECK(d.boundary_distance({0.0, 0.5}) == doctest::Approx(0.5));
    const Domain e = Domain::half_disc(1.0, {0.0, 0.0}, 0.0);
    CHECK(e.contains({0.9, 0.0}));
    CHECK_FALSE(e.contains({-0.1, 0.0}));
}

TEST_CASE("invalid shapes are rejected") {
    CHECK_THROWS_AS(Domain::disc(-1.0), Error);
    CHECK_THROWS_AS(Domain::ellipse(1.0, 2.0), Error);
    CHECK_THROWS_AS(Domain::convex_polygon({{0, 0}, {1, 0}, {2, 0}}), Error);
    CHECK_THROWS_AS(Domain::convex_polygon({{0, 0}, {0, 1}, {1, 0}}), Error);
}
