#include "doctest.h"

#include "shapeopt/error.hpp"
#include "shapeopt/functionals.hpp"
#include "test_support.hpp"

#include <numbers>

using namespace shapeopt;
using namespace shapeopt::testing;

namespace {

constexpr double kPi = std::numbers::pi;
const char* kPositiveCube = "(0.5*(abs(n2)+n2))*(0.5*(abs(n2)+n2))*(0.5*(abs(n2)+n2))";

} // namespace

TEST_CASE("profile form against closed forms")
{
    CHECK(std::abs(resistance_profile(RadialProfile::flat(1.0, 1.0, 1000)) - kPi) <= 1e-12);
    CHECK(std::abs(resistance_profile(RadialProfile::cone(1.0, 1.0, 1000)) - kPi / 2) <= 1e-6);
    CHECK(std::abs(resistance_profile(RadialProfile::cone(1.0, 2.0, 1000)) - kPi / 5) <= 1e-6);

    // 2 pi int_0^R r / (1 + s^2) dr for a cone of height M over radius R.
    for (double m : {0.3, 1.7, 5.0}) {
        const double s = m / 2.0;
        CHECK(resistance_profile(RadialProfile::cone(2.0, m, 400)) == doctest::Approx(4.0 * kPi / (1 + s * s)).epsilon(1e-12));
    }
}

TEST_CASE("boundary form")
{
    CHECK(std::abs(resistance_boundary_axisym(RadialProfile::flat(1.0, 1.0, 1000)) - kPi) <= 1e-12);

    RadialProfile hemi;
    const int n = 2000;
    hemi.heights.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double r = static_cast<double>(i) / n;
        hemi.heights[i] = std::sqrt(std::max(0.0, 1.0 - r * r));
    }
    CHECK(std::abs(resistance_boundary_axisym(hemi) - kPi / 2) <= 1e-3);

    std::mt19937_64 rng(21);
    for (int i = 0; i < 20; ++i) {
        const auto p = random_profile(rng, 50 + 37 * i, 0.5 + 0.1 * i, 0.2 + 0.3 * i);
        REQUIRE_NOTHROW(p.validate());
        const double a = resistance_profile(p);
        const double b = resistance_boundary_axisym(p);
        CHECK(std::abs(a - b) <= 1e-6 * a);
        CHECK(a > 0.0);
        CHECK(a <= kPi * p.radius * p.radius * (1 + 1e-12));
    }

    try {
        resistance_boundary_axisym(hemi, StreamDirection(1.0, 0.0, 0.0));
        FAIL("expected UnsupportedDirection");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::UnsupportedDirection);
    }
    CHECK_THROWS_AS(StreamDirection(0.0, 0.0, 2.0), Error);
}

TEST_CASE("profile validation")
{
    auto code = [](const RadialProfile& p) {
        try {
            p.validate();
        } catch (const Error& e) {
            return e.code();
        }
        return Errc::InvalidArgument;
    };
    RadialProfile rising = RadialProfile::cone(1.0, 1.0, 10);
    rising.heights[5] += 0.5;
    CHECK(code(rising) == Errc::InvalidProfile);

    RadialProfile convex;
    convex.heights = {1.0, 0.2, 0.1, 0.0};
    CHECK(code(convex) == Errc::InvalidProfile);

    RadialProfile tall = RadialProfile::flat(1.0, 1.0, 10);
    tall.max_height = 0.5;
    CHECK(code(tall) == Errc::InvalidProfile);

    RadialProfile negative = RadialProfile::flat(1.0, 1.0, 10);
    for (double& h : negative.heights)
        h = -0.1;
    CHECK(code(negative) == Errc::InvalidProfile);
    CHECK_THROWS_AS(resistance_profile(convex), Error);
}

TEST_CASE("2-D boundary functionals")
{
    const auto sq = unit_square();
    std::mt19937_64 rng(5);
    for (int i = 0; i < 10; ++i) {
        const auto p = random_hull(rng, 10);
        CHECK(boundary_functional_2d(p, parse_expr("1")) == doctest::Approx(p.perimeter()).epsilon(1e-12));
        CHECK(boundary_functional_2d(p, parse_expr("n1*n1+n2*n2")) == doctest::Approx(p.perimeter()).epsilon(1e-12));
        // Divergence theorem: the boundary integral of x . n is twice the area.
        CHECK(boundary_functional_2d(p, parse_expr("x1*n1+x2*n2")) == doctest::Approx(2.0 * p.area()).epsilon(1e-12));
    }
    CHECK(boundary_functional_2d(sq, parse_expr(kPositiveCube)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(boundary_functional_2d(sq, parse_expr("u")), Error);
    CHECK_THROWS_AS(boundary_functional_2d(sq, parse_expr("1/(x1-1)")), Error);
}

TEST_CASE("lower semicontinuity along jitter sequences")
{
    const auto f = parse_expr(kPositiveCube);
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        const auto base = random_round_polygon(rng, 7 + trial);
        const double limit = boundary_functional_2d(base, f);
        double tail_min = std::numeric_limits<double>::infinity();
        for (int n = 1; n <= 150; ++n) {
            const double value = boundary_functional_2d(jitter(base, 0.2 * std::pow(0.9, n), rng), f);
            if (n > 100)
                tail_min = std::min(tail_min, value);
        }
        CHECK(tail_min >= limit - 1e-3);
    }
}
