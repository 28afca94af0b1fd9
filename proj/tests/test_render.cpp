#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "wrinkle/error.hpp"
#include "wrinkle/render.hpp"

using namespace wrinkle;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("wrinkle_test_" + name)).string();
}

}  // namespace

TEST_CASE("number formatting") {
    CHECK(fmt9(0.0) == "0");
    CHECK(fmt9(1.0 / 3.0) == "0.333333333");
    CHECK(fmt9(std::nan("")) == "nan");
    CHECK(fmt9(-2.5e-12) == "-2.5e-12");
}

TEST_CASE("colour map endpoints") {
    CHECK(viridis(0.0) == "#440154");
    CHECK(viridis(1.0) == "#fde725");
    CHECK(viridis(-3.0) == viridis(0.0));
}

TEST_CASE("canvas maps y upwards") {
    SvgCanvas c({{0, 0}, {2, 1}}, 200, 10);
    const Point2 lo = c.map({0, 0}), hi = c.map({2, 1});
    CHECK(lo.x == doctest::Approx(10));
    CHECK(lo.y == doctest::Approx(110));
    CHECK(hi.x == doctest::Approx(210));
    CHECK(hi.y == doctest::Approx(10));
}

TEST_CASE("displacement CSV round trip") {
    DisplacementField f({-0.5, 0.25}, 0.125, 5, 3);
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 5; ++i) f.set(i, j, {{0.1 * i, -0.2 * j}, 1.0 / (1 + i + j)});
    const std::string p = temp_path("field.csv");
    f.write_csv(p);
    const auto g = DisplacementField::read_csv(p);
    CHECK(g.nx() == 5);
    CHECK(g.ny() == 3);
    CHECK(g.h() == doctest::Approx(0.125));
    CHECK(g.origin().x == doctest::Approx(-0.5));
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 5; ++i) {
            CHECK(g.w(i, j) == doctest::Approx(f.w(i, j)).epsilon(1e-9));
            CHECK(g.u(i, j).y == doctest::Approx(f.u(i, j).y).epsilon(1e-9));
        }
    std::remove(p.c_str());
}

TEST_CASE("malformed CSV is rejected") {
    const std::string p = temp_path("bad.csv");
    {
        std::ofstream out(p);
        out << "x,y,u1,u2,w\n0,0,0,0,0\n1,0,0,0\n";
    }
    CHECK_THROWS_AS(DisplacementField::read_csv(p), Error);
    std::remove(p.c_str());
    CHECK_THROWS_AS(DisplacementField::read_csv(temp_path("missing.csv")), Error);
}

TEST_CASE("pattern rendering is deterministic") {
    const Domain d = Domain::rectangle(2.0, 1.0);
    const AiryField a = minus_field(d);
    const auto part = partition(d, a);
    const auto fam = stable_lines(d, a, 0.1);
    const std::string s1 = pattern_svg(d, part, fam), s2 = pattern_svg(d, part, fam);
    CHECK(s1 == s2);
    CHECK(s1.find("<svg") == 0);
    CHECK(s1.find("stroke-width=\"2\"") != std::string::npos);
}
