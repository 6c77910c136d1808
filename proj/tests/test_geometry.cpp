#include "doctest.h"

#include "shapeopt/error.hpp"
#include "shapeopt/geometry.hpp"
#include "test_support.hpp"

#include <numbers>

using namespace shapeopt;
using namespace shapeopt::testing;

namespace {

Errc code_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return Errc::InvalidArgument;
}

} // namespace

TEST_CASE("polygon_from_vertices orders and validates input")
{
    const std::vector<Vec2> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const auto p = polygon_from_vertices(sq);
    CHECK(p.size() == 4);
    CHECK(p.area() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.perimeter() == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(p.vertex(0) == Vec2{0, 0});

    const std::vector<Vec2> shuffled{{0, 0}, {1, 1}, {1, 0}, {0, 1}};
    const auto q = polygon_from_vertices(shuffled);
    REQUIRE(q.size() == 4);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(q.vertex(i) == p.vertex(i));

    // (0.5, 0.1) has positive orientation against every hull edge.
    const std::vector<Vec2> dent{{0, 0}, {1, 0}, {0.5, 0.1}, {0.5, 1}};
    CHECK(orient({0, 0}, {1, 0}, {0.5, 0.1}) > 0.0);
    CHECK(orient({1, 0}, {0.5, 1}, {0.5, 0.1}) > 0.0);
    CHECK(orient({0.5, 1}, {0, 0}, {0.5, 0.1}) > 0.0);
    CHECK(code_of([&] { polygon_from_vertices(dent); }) == Errc::NonConvexInput);

    const std::vector<Vec2> line{{0, 0}, {1, 1}, {2, 2}};
    CHECK(code_of([&] { polygon_from_vertices(line); }) == Errc::DegenerateInput);

    // Points on an edge are in convex position and are dropped from the loop.
    const std::vector<Vec2> with_edge_point{{0, 0}, {0.5, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(polygon_from_vertices(with_edge_point).size() == 4);
}

TEST_CASE("area and perimeter")
{
    const auto tri = ConvexPolygon::from_ccw({{0, 0}, {1, 0}, {0, 1}});
    CHECK(tri.area() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(tri.perimeter() == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-15));

    const auto gon = regular_polygon(64, 1.0);
    const double expected = 32.0 * std::sin(2.0 * std::numbers::pi / 64.0);
    CHECK(gon.area() == doctest::Approx(expected).epsilon(1e-14));
    CHECK(expected == doctest::Approx(3.1365).epsilon(1e-4));
}

TEST_CASE("inradius_center")
{
    auto sq = inradius_center(unit_square());
    CHECK(sq.radius == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sq.center.x == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sq.center.y == doctest::Approx(0.5).epsilon(1e-12));

    auto tri = inradius_center(ConvexPolygon::from_ccw({{0, 0}, {1, 0}, {0, 1}}));
    const double r = (2.0 - std::sqrt(2.0)) / 2.0;  // (a + b - c) / 2
    CHECK(tri.radius == doctest::Approx(r).epsilon(1e-12));
    CHECK(tri.center.x == doctest::Approx(r).epsilon(1e-12));
    CHECK(tri.center.y == doctest::Approx(r).epsilon(1e-12));

    // Optimal face is a segment; the tie rule picks its left end.
    auto rect = inradius_center(ConvexPolygon::from_ccw({{0, 0}, {3, 0}, {3, 1}, {0, 1}}));
    CHECK(rect.radius == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(rect.center.x - 0.5) < 1e-9);
    CHECK(std::abs(rect.center.y - 0.5) < 1e-9);
    const auto oracle = chebyshev_by_triples(ConvexPolygon::from_ccw({{0, 0}, {3, 0}, {3, 1}, {0, 1}}));
    CHECK(std::abs(oracle.center.x - 0.5) < 1e-12);

    SUBCASE("matches edge-triple enumeration on random polygons")
    {
        std::mt19937_64 rng(11);
        for (int i = 0; i < 40; ++i) {
            const auto p = random_hull(rng, 10);
            const auto got = inradius_center(p);
            const auto want = chebyshev_by_triples(p);
            CHECK(got.radius == doctest::Approx(want.radius).epsilon(1e-10));
            CHECK(distance(got.center, want.center) < 1e-7);
            CHECK(boundary_clearance(p, got.center) >= got.radius - 1e-12);
        }
    }
}

TEST_CASE("hausdorff_distance")
{
    const auto sq = unit_square();
    CHECK(hausdorff_distance(sq, sq) == 0.0);
    CHECK(hausdorff_distance(sq, translate(sq, {0.3, 0.0})) == doctest::Approx(0.3).epsilon(1e-12));

    const auto big = square(0, 0, 2);
    const double oracle = sampled_hausdorff(sq, big, 1e-3);
    CHECK(oracle == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
    CHECK(hausdorff_distance(sq, big) == doctest::Approx(oracle).epsilon(1e-6));

    SUBCASE("agrees with dense sampling on random pairs")
    {
        std::mt19937_64 rng(5);
        for (int i = 0; i < 10; ++i) {
            const auto a = random_hull(rng, 8);
            const auto b = random_hull(rng, 8, 1.0, {0.3, -0.2});
            CHECK(hausdorff_distance(a, b) == doctest::Approx(sampled_hausdorff(a, b, 2e-3)).epsilon(2e-3));
        }
    }

    SUBCASE("metric axioms")
    {
        std::mt19937_64 rng(6);
        for (int i = 0; i < 30; ++i) {
            const auto a = random_hull(rng);
            const auto b = random_hull(rng);
            const auto c = random_hull(rng);
            const double ab = hausdorff_distance(a, b);
            CHECK(ab == hausdorff_distance(b, a));
            CHECK(ab <= (hausdorff_distance(a, c) + hausdorff_distance(c, b)) * (1.0 + 1e-12));
            CHECK(hausdorff_distance(a, a) <= kGeomEps * a.diameter());
        }
    }
}

TEST_CASE("minkowski_dilate")
{
    const auto sq = unit_square();
    const auto same = minkowski_dilate(sq, 0.0, 8);
    CHECK(same.size() == sq.size());
    CHECK(same.area() == sq.area());

    CHECK(code_of([&] { minkowski_dilate(sq, -0.1, 8); }) == Errc::NegativeEpsilon);

    const double eps = 0.1;
    const double steiner_area = 1.0 + 4.0 * eps + std::numbers::pi * eps * eps;
    const double steiner_perimeter = 4.0 + 2.0 * std::numbers::pi * eps;
    const auto d32 = minkowski_dilate(sq, eps, 32);
    CHECK(d32.area() < steiner_area);
    CHECK(steiner_area - d32.area() < 1e-4);
    CHECK(steiner_area == doctest::Approx(1.43142).epsilon(1e-5));

    double last = 0.0;
    for (int segs : {1, 2, 4, 8, 16, 64}) {
        const double per = minkowski_dilate(sq, eps, segs).perimeter();
        CHECK(per < steiner_perimeter);
        CHECK(per > last);
        last = per;
    }
    CHECK(steiner_perimeter - last < 1e-4);

    SUBCASE("chord error bound")
    {
        // The exact dilation is within eps of the square; sample it densely.
        const auto d = minkowski_dilate(sq, eps, 8);
        const double bound = eps * (1.0 - std::cos(std::numbers::pi / 2.0 / 8.0 / 2.0));
        for (const Vec2& p : boundary_samples(d, 1e-3)) {
            const double gap = eps - point_distance(sq, p);
            CHECK(gap >= -1e-12);
            CHECK(gap <= bound + 1e-12);
        }
    }
}

TEST_CASE("scale_about and contains")
{
    const auto sq = unit_square();
    const auto id = scale_about(sq, {0.5, 0.5}, 1.0);
    CHECK(hausdorff_distance(id, sq) == 0.0);
    CHECK(scale_about(sq, sq.centroid(), 2.0).area() == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(code_of([&] { scale_about(sq, {0, 0}, 0.0); }) == Errc::NonPositiveScale);

    CHECK(contains(sq, square(0.2, 0.2, 0.6)));
    CHECK(contains(sq, sq));
    CHECK_FALSE(contains(sq, translate(sq, {0.5, 0.0})));

    SUBCASE("dilation sits inside the (1 + eps/rho) scaling")
    {
        std::mt19937_64 rng(21);
        for (int i = 0; i < 50; ++i) {
            const auto p = random_hull(rng, 9);
            const auto ball = inradius_center(p);
            for (double frac : {0.05, 0.3, 1.0}) {
                const double eps = frac * ball.radius;
                const auto dil = minkowski_dilate(p, eps, 16);
                CHECK(contains(dil, p));
                CHECK(contains(scale_about(p, ball.center, 1.0 + eps / ball.radius), dil));
            }
        }
    }
}

TEST_CASE("radial_parametrization")
{
    const auto disk = regular_polygon(256, 2.0);
    const auto rf = radial_parametrization(disk, 37);
    for (double r : rf.samples)
        CHECK(r == doctest::Approx(2.0).epsilon(1e-3));

    const auto sq = radial_parametrization(unit_square(), 8);
    CHECK(sq.center.x == doctest::Approx(0.5));
    CHECK(sq.center.y == doctest::Approx(0.5));
    for (int i : {0, 2, 4, 6})
        CHECK(sq.samples[i] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sq.samples[1] == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-12));

    CHECK_THROWS_AS(radial_parametrization(unit_square(), 4), Error);

    SUBCASE("reconstruction error shrinks along a dyadic ladder")
    {
        std::mt19937_64 rng(3);
        for (int trial = 0; trial < 10; ++trial) {
            const auto p = random_hull(rng, 15);
            double last = std::numeric_limits<double>::infinity();
            for (int n = 16; n <= 512; n *= 2) {
                const auto rec = reconstruct(radial_parametrization(p, n));
                const double d = hausdorff_distance(p, rec);
                CHECK(d <= last + 1e-12);
                CHECK(contains(p, rec));
                last = d;
            }
            CHECK(last < 0.05 * p.diameter());
        }
    }
}

TEST_CASE("bonnesen_check")
{
    const auto rep = bonnesen_check(unit_square());
    CHECK(rep.slack == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.inradius == doctest::Approx(0.5).epsilon(1e-12));

    const auto disk = bonnesen_check(regular_polygon(256, 1.0));
    CHECK(std::abs(disk.slack - std::numbers::pi) < 1e-2);

    std::mt19937_64 rng(2024);
    for (int i = 0; i < 100; ++i) {
        const auto r = bonnesen_check(random_hull(rng, 3 + i % 20));
        CHECK(r.slack > 0.0);
    }
}

TEST_CASE("project_to_class")
{
    const Box d({0, 0}, {4, 4});
    const auto sq = square(1, 1, 1);
    const auto same = project_to_class(sq, d, 1.0);
    CHECK(hausdorff_distance(same, sq) < 1e-12);

    const auto grown = project_to_class(unit_square(), d, 4.0);
    CHECK(grown.area() == doctest::Approx(4.0).epsilon(1e-9));
    // Side-s square at the corner iterates s -> s/2 + 1, fixed point [0,2]^2.
    CHECK(hausdorff_distance(grown, square(0, 0, 2)) < 1e-8);

    const auto shrunk = project_to_class(square(-2, -2, 4), d, 1.0);
    CHECK(shrunk.area() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(hausdorff_distance(shrunk, square(0.5, 0.5, 1)) < 1e-12);

    CHECK(code_of([&] { project_to_class(sq, d, 17.0); }) == Errc::InfeasibleVolume);

    std::mt19937_64 rng(8);
    const auto box_poly = box_polygon(d);
    for (int i = 0; i < 30; ++i) {
        std::uniform_real_distribution<double> m(0.2, 8.0);
        const double target = m(rng);
        const auto p = project_to_class(random_hull(rng, 10, 2.5, {2, 2}), d, target);
        CHECK(std::abs(p.area() - target) <= 1e-9 * target);
        CHECK(contains(box_poly, p));
    }
}

TEST_CASE("edge_normals")
{
    const auto n = edge_normals(unit_square());
    REQUIRE(n.size() == 4);
    const Vec2 expected[] = {{0, -1}, {1, 0}, {0, 1}, {-1, 0}};
    for (int i = 0; i < 4; ++i) {
        CHECK(n[i].normal.x == doctest::Approx(expected[i].x));
        CHECK(n[i].normal.y == doctest::Approx(expected[i].y));
        CHECK(n[i].length == doctest::Approx(1.0));
    }

    std::mt19937_64 rng(9);
    for (int i = 0; i < 20; ++i) {
        Vec2 sum;
        for (const auto& e : edge_normals(random_hull(rng)))
            sum += e.length * e.normal;
        CHECK(norm(sum) < 1e-13);
    }

    // Corner-arc chord normals approach the radial direction from the corner.
    double last = 1.0;
    for (int segs : {2, 4, 8, 16, 32}) {
        const auto d = minkowski_dilate(unit_square(), 0.1, segs);
        double worst = 0.0;
        const auto normals = edge_normals(d);
        for (std::size_t i = 0; i < d.size(); ++i) {
            // Radial direction at the chord's start point on the arc.
            const Vec2 start = d.vertex(i);
            const Vec2 mid = 0.5 * (start + d.vertex(i + 1));
            if (mid.x <= 1.0 || mid.y <= 1.0)
                continue;
            const Vec2 radial = (1.0 / norm(start - Vec2{1, 1})) * (start - Vec2{1, 1});
            worst = std::max(worst, std::acos(std::clamp(dot(radial, normals[i].normal), -1.0, 1.0)));
        }
        // Half the chord angle.
        CHECK(worst == doctest::Approx(std::numbers::pi / 4.0 / segs).epsilon(1e-9));
        CHECK(worst < last);
        last = worst;
    }
}

TEST_CASE("properties of converging sequences")
{
    std::mt19937_64 rng(77);

    SUBCASE("perimeter is monotone under inclusion")
    {
        for (int i = 0; i < 50; ++i) {
            const auto outer = random_hull(rng, 12);
            const auto inner = random_hull(rng, 6, 0.4, outer.centroid());
            std::vector<Vec2> clipped;
            for (const Vec2& v : inner.vertices())
                if (contains(outer, v))
                    clipped.push_back(v);
            if (clipped.size() < 3)
                continue;
            const auto in = convex_hull(clipped);
            REQUIRE(contains(outer, in));
            CHECK(in.perimeter() <= outer.perimeter() * (1.0 + 1e-12));
        }
    }

    SUBCASE("area and perimeter converge at rate 1/n under vertex jitter")
    {
        for (int trial = 0; trial < 10; ++trial) {
            const auto base = random_hull(rng, 10);
            double worst_scaled = 0.0;
            for (int n = 1; n <= 1024; n *= 2) {
                const auto pn = jitter(base, 1.0 / n, rng);
                CHECK(hausdorff_distance(pn, base) <= 1.0 / n + 1e-12);
                const double gap = std::max(std::abs(pn.area() - base.area()),
                                            std::abs(pn.perimeter() - base.perimeter()));
                worst_scaled = std::max(worst_scaled, gap * n);
            }
            // |dA| <= eps P + pi eps^2 and |dP| <= 2 pi eps for eps = 1/n.
            CHECK(worst_scaled <= std::max(base.perimeter() + std::numbers::pi, 2.0 * std::numbers::pi) + 1e-9);
        }
    }

    SUBCASE("normals converge under uniform convergence")
    {
        const auto base = regular_polygon(7, 1.0);
        const auto base_normals = edge_normals(base);
        double last = 4.0;
        for (int n = 4; n <= 4096; n *= 4) {
            double worst = 0.0;
            for (int rep = 0; rep < 5; ++rep) {
                const auto pn = jitter(base, 1.0 / n, rng);
                const auto nn = edge_normals(pn);
                for (std::size_t i = 0; i < base.size(); ++i) {
                    // Compare at the base edge midpoint with the nearest edge of pn.
                    const Vec2 x = 0.5 * (base.vertex(i) + base.vertex(i + 1));
                    std::size_t best = 0;
                    double bd = std::numeric_limits<double>::infinity();
                    for (std::size_t j = 0; j < pn.size(); ++j) {
                        const double d = distance(x, 0.5 * (pn.vertex(j) + pn.vertex(j + 1)));
                        if (d < bd) {
                            bd = d;
                            best = j;
                        }
                    }
                    const double c = std::clamp(dot(nn[best].normal, base_normals[i].normal), -1.0, 1.0);
                    worst = std::max(worst, std::acos(c));
                }
            }
            CHECK(worst <= last + 1e-12);
            last = worst;
        }
        CHECK(last < 1e-2);
    }
}
