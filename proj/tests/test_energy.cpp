#include <cmath>

#include "doctest.h"
#include "wrinkle/energy.hpp"
#include "wrinkle/error.hpp"

using namespace wrinkle;

namespace {

class Lambda final : public FieldSource {
public:
    explicit Lambda(std::function<FieldValue(Point2)> f) : f_(std::move(f)) {}
    FieldValue at(Point2 x) const override { return f_(x); }

private:
    std::function<FieldValue(Point2)> f_;
};

const Domain unit_square = Domain::convex_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
const TargetFunction no_target = [](Point2) { return std::optional<Sym2>(Sym2{}); };

}  // namespace

TEST_CASE("zero field has zero energy") {
    const Lambda zero([](Point2) { return FieldValue{}; });
    const EnergyParams p{1e-4, 1.0, 0.0};
    const auto e = energy_against_target(zero, unit_square, no_target, p, 1.0 / 64);
    CHECK(e.total == 0.0);
    const auto f = energy(zero, unit_square, ShellProfile::flat(), p, 1.0 / 64);
    CHECK(f.total == 0.0);
}

TEST_CASE("uniaxial stretch") {
    const double s = 0.3;
    const Lambda lin([&](Point2 x) { return FieldValue{{s * x.x, 0.0}, 0.0}; });
    const auto e = energy_against_target(lin, unit_square, no_target, {1e-4, 1.0, 0.0}, 1.0 / 32);
    CHECK(e.stretching == doctest::Approx(0.5 * s * s).epsilon(1e-12));
    CHECK(e.bending == 0.0);
    CHECK(e.substrate == 0.0);
}

TEST_CASE("shifted energy identity") {
    const double g = 0.7;
    const Lambda f([](Point2 x) {
        return FieldValue{{0.3 * x.x + 0.1 * x.y, -0.2 * x.x + 0.05 * x.y}, 0.1 * std::sin(3 * x.x) * std::cos(2 * x.y)};
    });
    const EnergyParams p{1e-3, 2.0, g};
    const auto r = evaluate_energy(f, unit_square, StrainReference::from_defect(no_target), p, 1.0 / 64);
    CHECK(r.area == doctest::Approx(1.0));
    CHECK(r.boundary_flux == doctest::Approx(0.3 + 0.05));
    CHECK(std::abs(r.shifted - (r.energy.total + g * g * r.area)) < 1e-8);
}

TEST_CASE("quadrature converges at second order") {
    // w = 0.1 sin(pi x) sin(pi y): substrate k 0.01/8, bending b 0.01 pi^4 / 2
    const Lambda f([](Point2 x) { return FieldValue{{}, 0.1 * std::sin(pi * x.x) * std::sin(pi * x.y)}; });
    const EnergyParams p{1e-4, 1.0, 0.0};
    double err[3];
    for (int i = 0; i < 3; ++i) {
        const double h = 1.0 / (16 << i);
        const auto e = energy_against_target(f, unit_square, no_target, p, h);
        err[i] = std::abs(e.bending - 0.5 * p.b * 0.01 * std::pow(pi, 4));
        CHECK(e.substrate == doctest::Approx(0.5 * 0.01 / 4.0).epsilon(1e-2));
    }
    CHECK(std::log2(err[0] / err[1]) > 1.8);
    CHECK(std::log2(err[1] / err[2]) > 1.8);
}

TEST_CASE("sampled fields use the same energy") {
    const Lambda f([](Point2 x) { return FieldValue{{0.01 * x.y * x.y, 0.0}, 0.05 * std::cos(4 * x.x)}; });
    const double h = 1.0 / 128;
    const auto grid = DisplacementField::sample(f, {{0, 0}, {1, 1}}, h);
    const EnergyParams p{1e-4, 1.0, 0.0};
    const auto a = energy(grid, unit_square, ShellProfile::flat(), p);
    const auto b = energy(f, unit_square, ShellProfile::flat(), p, h);
    CHECK(a.substrate == doctest::Approx(b.substrate).epsilon(2e-2));
    CHECK(a.stretching == doctest::Approx(b.stretching).epsilon(5e-2));
}

TEST_CASE("parameter validation") {
    const Lambda zero([](Point2) { return FieldValue{}; });
    CHECK_THROWS_AS(energy_against_target(zero, unit_square, no_target, {-1.0, 1.0, 0.0}, 0.01), Error);
    CHECK_THROWS_AS(energy_against_target(zero, unit_square, no_target, {1e-4, 1.0, -0.1}, 0.01), Error);
    CHECK_THROWS_AS(check_regime({{1e-6, 1.0, 0.0}, {1e-8, 1.0, 0.0}}), Error);
}

TEST_CASE("interpolation inequality") {
    const Box box{{0, 0}, {1, 1}};
    const ScalarField chi{
        [](Point2 x) { return std::pow(std::sin(pi * x.x) * std::sin(pi * x.y), 2); },
        [](Point2 x) {
            const double s = std::sin(pi * x.x), t = std::sin(pi * x.y);
            return Vec2{2 * pi * s * std::cos(pi * x.x) * t * t, 2 * pi * t * std::cos(pi * x.y) * s * s};
        },
        [](Point2 x) {
            const double s = std::sin(pi * x.x), t = std::sin(pi * x.y), cs = std::cos(pi * x.x),
                         ct = std::cos(pi * x.y);
            const double pp = 2 * pi * pi;
            return Sym2{pp * (cs * cs - s * s) * t * t, 4 * pi * pi * s * cs * t * ct, pp * (ct * ct - t * t) * s * s};
        }};
    const ScalarField zero{[](Point2) { return 0.0; }, [](Point2) { return Vec2{}; }, [](Point2) { return Sym2{}; }};
    const auto z = interpolation_check(zero, chi, box, 64, 1e-4, 1.0);
    CHECK(z.lhs == 0.0);
    CHECK(z.margin == doctest::Approx(0.0));
    const double l = 0.1;
    const ScalarField w{[&](Point2 x) { return std::cos(x.x / l); },
                        [&](Point2 x) { return Vec2{-std::sin(x.x / l) / l, 0.0}; },
                        [&](Point2 x) { return Sym2{-std::cos(x.x / l) / (l * l), 0.0, 0.0}; }};
    const auto m = interpolation_check(w, chi, box, 256, 1e-4, 1.0);
    CHECK(m.margin >= -1e-9 * m.scale);
}

TEST_CASE("duality gap for the positive ellipse") {
    DefectOptions o;
    o.grid = {128, 128};
    CHECK(duality_gap(Domain::ellipse(2.0, 1.0), ShellProfile::constant(1.0), {128, 128}, o) < 1e-2);
}
