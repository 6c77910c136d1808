#pragma once

// Random generators and brute-force oracles shared by the test suites. The
// oracles here deliberately avoid the library's own algorithms.

#include "shapeopt/functionals.hpp"
#include "shapeopt/geometry.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

namespace shapeopt::testing {

/// Convex hull of `count` uniform points in [-1, 1]^2 scaled to `radius`.
inline ConvexPolygon random_hull(std::mt19937_64& rng, int count = 12, double radius = 1.0, Vec2 center = {})
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        std::vector<Vec2> pts;
        for (int i = 0; i < count; ++i)
            pts.push_back(center + radius * Vec2{u(rng), u(rng)});
        try {
            return convex_hull(pts);
        } catch (...) {
        }
    }
}

/// Regular n-gon with radii jittered multiplicatively by up to `jitter`.
/// Corners stay well away from slivers, which keeps meshes well shaped.
inline ConvexPolygon random_round_polygon(std::mt19937_64& rng, int n = 10, double radius = 1.0,
                                          double jitter = 0.15, Vec2 center = {})
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    const double p0 = phase(rng);
    std::vector<Vec2> pts;
    for (int i = 0; i < n; ++i) {
        const double t = p0 + 2.0 * std::numbers::pi * i / n;
        const double r = radius * (1.0 + jitter * u(rng));
        pts.push_back(center + r * Vec2{std::cos(t), std::sin(t)});
    }
    return convex_hull(pts);
}

/// Moves every vertex by a random vector of length <= eps, then takes the hull.
inline ConvexPolygon jitter(const ConvexPolygon& poly, double eps, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> len(0.0, 1.0);
    std::vector<Vec2> pts;
    for (const Vec2& v : poly.vertices()) {
        const double a = angle(rng);
        pts.push_back(v + eps * len(rng) * Vec2{std::cos(a), std::sin(a)});
    }
    return convex_hull(pts);
}

/// Points spaced at most `step` apart along the boundary.
inline std::vector<Vec2> boundary_samples(const ConvexPolygon& poly, double step)
{
    std::vector<Vec2> out;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2 a = poly.vertex(i);
        const Vec2 b = poly.vertex(i + 1);
        const int k = std::max(1, static_cast<int>(std::ceil(distance(a, b) / step)));
        for (int j = 0; j < k; ++j)
            out.push_back(a + (static_cast<double>(j) / k) * (b - a));
    }
    return out;
}

/// Brute-force Hausdorff distance between dense boundary samplings. For
/// convex bodies the sup is attained on the boundary.
inline double sampled_hausdorff(const ConvexPolygon& a, const ConvexPolygon& b, double step)
{
    const auto sa = boundary_samples(a, step);
    const auto sb = boundary_samples(b, step);
    auto inside = [](const ConvexPolygon& p, Vec2 q) {
        for (std::size_t i = 0; i < p.size(); ++i)
            if (orient(p.vertex(i), p.vertex(i + 1), q) < 0.0)
                return false;
        return true;
    };
    auto directed = [&](const std::vector<Vec2>& from, const ConvexPolygon& target, const std::vector<Vec2>& to) {
        double d = 0.0;
        for (const Vec2& p : from) {
            if (inside(target, p))
                continue;
            double best = std::numeric_limits<double>::infinity();
            for (const Vec2& q : to)
                best = std::min(best, distance(p, q));
            d = std::max(d, best);
        }
        return d;
    };
    return std::max(directed(sa, b, sb), directed(sb, a, sa));
}

/// Chebyshev ball by enumerating every triple of edge lines: each candidate
/// is the point equidistant from three lines, kept when feasible. The best
/// radius wins; ties go to the lexicographically smallest center.
inline InscribedBall chebyshev_by_triples(const ConvexPolygon& poly)
{
    struct Line {
        Vec2 n;
        double c;
    };
    std::vector<Line> lines;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2 a = poly.vertex(i);
        const Vec2 e = poly.vertex(i + 1) - a;
        const Vec2 n = (1.0 / norm(e)) * Vec2{e.y, -e.x};
        lines.push_back({n, dot(n, a)});
    }
    InscribedBall best{{}, -1.0};
    const double tol = 1e-12 * poly.diameter();
    const std::size_t m = lines.size();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            for (std::size_t k = j + 1; k < m; ++k) {
                // n . x + r = c for the three lines; Cramer's rule on 3x3.
                const Line L[3] = {lines[i], lines[j], lines[k]};
                const double det = L[0].n.x * (L[1].n.y - L[2].n.y) - L[0].n.y * (L[1].n.x - L[2].n.x) +
                                   (L[1].n.x * L[2].n.y - L[2].n.x * L[1].n.y);
                if (std::abs(det) < 1e-14)
                    continue;
                const double dx = L[0].c * (L[1].n.y - L[2].n.y) - L[0].n.y * (L[1].c - L[2].c) +
                                  (L[1].c * L[2].n.y - L[2].c * L[1].n.y);
                const double dy = L[0].n.x * (L[1].c - L[2].c) - L[0].c * (L[1].n.x - L[2].n.x) +
                                  (L[1].n.x * L[2].c - L[2].n.x * L[1].c);
                const double dr = L[0].n.x * (L[1].n.y * L[2].c - L[2].n.y * L[1].c) -
                                  L[0].n.y * (L[1].n.x * L[2].c - L[2].n.x * L[1].c) +
                                  L[0].c * (L[1].n.x * L[2].n.y - L[2].n.x * L[1].n.y);
                const Vec2 x{dx / det, dy / det};
                const double r = dr / det;
                bool feasible = r > 0.0;
                for (const Line& l : lines)
                    feasible = feasible && dot(l.n, x) + r <= l.c + tol;
                if (!feasible)
                    continue;
                if (r > best.radius + tol || (std::abs(r - best.radius) <= tol && lex_less(x, best.center)))
                    best = {x, r};
            }
    return best;
}

/// Random concave nonincreasing profile: sorted nonpositive slopes integrated
/// down from M, rescaled so the rim height stays nonnegative.
inline RadialProfile random_profile(std::mt19937_64& rng, int n_r = 200, double radius = 1.0, double max_height = 1.0)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double steep = 4.0 * u(rng);
    std::vector<double> slopes(static_cast<std::size_t>(n_r));
    for (double& s : slopes)
        s = -steep * u(rng) * u(rng);
    std::sort(slopes.begin(), slopes.end(), std::greater<>());
    RadialProfile p;
    p.radius = radius;
    p.max_height = max_height;
    p.heights.assign(static_cast<std::size_t>(n_r) + 1, max_height);
    const double dr = radius / n_r;
    for (int i = 0; i < n_r; ++i)
        p.heights[i + 1] = p.heights[i] + slopes[i] * dr;
    if (p.heights.back() < 0.0) {
        const double scale = max_height / (max_height - p.heights.back());
        for (double& h : p.heights)
            h = std::max(0.0, max_height + scale * (h - max_height));
    }
    return p;
}

inline ConvexPolygon unit_square() { return ConvexPolygon::from_ccw({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

inline ConvexPolygon square(double x0, double y0, double side)
{
    return ConvexPolygon::from_ccw({{x0, y0}, {x0 + side, y0}, {x0 + side, y0 + side}, {x0, y0 + side}});
}

} // namespace shapeopt::testing
