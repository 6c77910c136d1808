#include "shapeopt/geometry.hpp"

#include "shapeopt/error.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace shapeopt {

namespace {

double shoelace(std::span<const Vec2> v)
{
    // Relative to the first vertex to limit cancellation far from the origin.
    double twice = 0.0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i)
        twice += orient(v[0], v[i], v[i + 1]);
    return 0.5 * twice;
}

// Strict hull by Andrew's monotone chain; CCW, starts at the lexicographic minimum.
std::vector<Vec2> monotone_chain(std::span<const Vec2> points)
{
    std::vector<Vec2> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), lex_less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3)
        return pts;

    std::vector<Vec2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const Vec2& p : pts) {
        while (k >= 2 && orient(hull[k - 2], hull[k - 1], p) <= 0.0)
            --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        const Vec2& p = pts[i];
        while (k >= lower && orient(hull[k - 2], hull[k - 1], p) <= 0.0)
            --k;
        hull[k++] = p;
    }
    hull.resize(k - 1);
    return hull;
}

double calipers_diameter(std::span<const Vec2> hull)
{
    const std::size_t n = hull.size();
    if (n < 2)
        return 0.0;
    if (n == 2)
        return distance(hull[0], hull[1]);
    double best = 0.0;
    std::size_t j = 1;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = hull[i];
        const Vec2 b = hull[(i + 1) % n];
        while (std::abs(orient(a, b, hull[(j + 1) % n])) > std::abs(orient(a, b, hull[j])))
            j = (j + 1) % n;
        best = std::max({best, distance(a, hull[j]), distance(b, hull[j])});
    }
    return best;
}

// Sutherland-Hodgman step: keep the part of a convex loop with dot(n, x) <= b.
std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& loop, Vec2 n, double b)
{
    std::vector<Vec2> out;
    const std::size_t sz = loop.size();
    if (sz == 0)
        return out;
    out.reserve(sz + 1);
    for (std::size_t i = 0; i < sz; ++i) {
        const Vec2 p = loop[i];
        const Vec2 q = loop[(i + 1) % sz];
        const double sp = dot(n, p) - b;
        const double sq = dot(n, q) - b;
        if (sp <= 0.0)
            out.push_back(p);
        if ((sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0)) {
            const double t = sp / (sp - sq);
            out.push_back(p + t * (q - p));
        }
    }
    return out;
}

struct EdgeLine {
    Vec2 normal;    // unit outward
    double offset;  // dot(normal, x) <= offset inside
};

std::vector<EdgeLine> edge_lines(const ConvexPolygon& poly)
{
    std::vector<EdgeLine> lines;
    lines.reserve(poly.size());
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2 a = poly.vertex(i);
        const Vec2 e = poly.vertex(i + 1) - a;
        const Vec2 n = (1.0 / norm(e)) * Vec2{e.y, -e.x};
        lines.push_back({n, dot(n, a)});
    }
    return lines;
}

std::vector<Vec2> inner_parallel(const ConvexPolygon& poly, std::span<const EdgeLine> lines, double t)
{
    std::vector<Vec2> loop(poly.vertices().begin(), poly.vertices().end());
    for (const EdgeLine& l : lines) {
        loop = clip_halfplane(loop, l.normal, l.offset - t);
        if (loop.empty())
            break;
    }
    return loop;
}

double segment_distance(Vec2 p, Vec2 a, Vec2 b)
{
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, a + t * ab);
}

double directed_hausdorff(const ConvexPolygon& from, const ConvexPolygon& to)
{
    double d = 0.0;
    for (const Vec2& v : from.vertices())
        d = std::max(d, point_distance(to, v));
    return d;
}

} // namespace

Box::Box(Vec2 lower, Vec2 upper) : lower_(lower), upper_(upper)
{
    if (!(lower.x < upper.x && lower.y < upper.y))
        throw Error(Errc::InvalidArgument, "box lower corner must be below upper corner");
}

Vec2 RadialFunction::direction(std::size_t i) const
{
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(samples.size());
    return {std::cos(theta), std::sin(theta)};
}

ConvexPolygon::ConvexPolygon(std::vector<Vec2> vertices) : vertices_(std::move(vertices))
{
    area_ = shoelace(vertices_);
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        perimeter_ += distance(vertices_[i], vertex(i + 1));
    diameter_ = calipers_diameter(monotone_chain(vertices_));
}

ConvexPolygon ConvexPolygon::from_ccw(std::vector<Vec2> vertices)
{
    if (vertices.size() < 3)
        throw Error(Errc::DegenerateInput, "polygon needs at least 3 vertices");

    double extent = 0.0;
    {
        auto [minx, maxx] = std::minmax_element(vertices.begin(), vertices.end(),
                                                [](Vec2 a, Vec2 b) { return a.x < b.x; });
        auto [miny, maxy] = std::minmax_element(vertices.begin(), vertices.end(),
                                                [](Vec2 a, Vec2 b) { return a.y < b.y; });
        extent = std::hypot(maxx->x - minx->x, maxy->y - miny->y);
    }
    if (!(extent > 0.0) || !std::isfinite(extent))
        throw Error(Errc::DegenerateInput, "polygon has no extent");

    const double merge = kGeomEps * extent;
    std::vector<Vec2> v;
    v.reserve(vertices.size());
    for (const Vec2& p : vertices)
        if (v.empty() || distance(v.back(), p) > merge)
            v.push_back(p);
    while (v.size() > 1 && distance(v.front(), v.back()) <= merge)
        v.pop_back();
    if (v.size() < 3)
        throw Error(Errc::DegenerateInput, "polygon collapses to fewer than 3 vertices");

    std::rotate(v.begin(), std::min_element(v.begin(), v.end(), lex_less), v.end());

    const double slack = kGeomEps * extent * extent;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec2 a = v[i];
        const Vec2 b = v[(i + 1) % v.size()];
        const Vec2 c = v[(i + 2) % v.size()];
        if (orient(a, b, c) < -slack)
            throw Error(Errc::NonConvexInput, "vertex loop is not convex and counter-clockwise");
    }
    if (!(shoelace(v) > 0.0))
        throw Error(Errc::DegenerateInput, "polygon area is not positive");
    return ConvexPolygon(std::move(v));
}

Vec2 ConvexPolygon::centroid() const
{
    Vec2 acc;
    double twice = 0.0;
    const Vec2 o = vertices_[0];
    for (std::size_t i = 1; i + 1 < vertices_.size(); ++i) {
        const double w = orient(o, vertices_[i], vertices_[i + 1]);
        acc += w * (o + vertices_[i] + vertices_[i + 1]);
        twice += w;
    }
    return (1.0 / (3.0 * twice)) * acc;
}

std::pair<Vec2, Vec2> ConvexPolygon::bounding_box() const
{
    Vec2 lo = vertices_[0];
    Vec2 hi = vertices_[0];
    for (const Vec2& p : vertices_) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    return {lo, hi};
}

ConvexPolygon convex_hull(std::span<const Vec2> points)
{
    for (const Vec2& p : points)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw Error(Errc::DegenerateInput, "non-finite coordinate");
    auto hull = monotone_chain(points);
    if (hull.size() < 3 || !(shoelace(hull) > 0.0))
        throw Error(Errc::DegenerateInput, "convex hull has zero area");
    return ConvexPolygon::from_ccw(std::move(hull));
}

ConvexPolygon polygon_from_vertices(std::span<const Vec2> points)
{
    if (points.size() < 3)
        throw Error(Errc::DegenerateInput, "at least 3 points are required");
    ConvexPolygon hull = convex_hull(points);
    const double tol = kGeomEps * hull.diameter();
    for (const Vec2& p : points) {
        // Inside the hull, so clearance is the distance to the boundary.
        if (boundary_clearance(hull, p) > tol)
            throw Error(Errc::NonConvexInput, "point lies strictly inside the convex hull");
    }
    return hull;
}

InscribedBall inradius_center(const ConvexPolygon& poly)
{
    const auto lines = edge_lines(poly);
    // Area = sum of edge length times apothem / 2 >= radius * perimeter / 2.
    double lo = 0.0;
    double hi = 2.0 * poly.area() / poly.perimeter() * (1.0 + 1e-12);
    std::vector<Vec2> region(poly.vertices().begin(), poly.vertices().end());
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi))
            break;
        auto trial = inner_parallel(poly, lines, mid);
        if (trial.empty()) {
            hi = mid;
        } else {
            lo = mid;
            region = std::move(trial);
        }
    }
    const Vec2 center = *std::min_element(region.begin(), region.end(), lex_less);
    return {center, std::max(0.0, boundary_clearance(poly, center))};
}

double boundary_clearance(const ConvexPolygon& poly, Vec2 p)
{
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2 a = poly.vertex(i);
        const Vec2 e = poly.vertex(i + 1) - a;
        best = std::min(best, cross(e, p - a) / norm(e));
    }
    return best;
}

double point_distance(const ConvexPolygon& poly, Vec2 p)
{
    if (boundary_clearance(poly, p) >= 0.0)
        return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i)
        best = std::min(best, segment_distance(p, poly.vertex(i), poly.vertex(i + 1)));
    return best;
}

double hausdorff_distance(const ConvexPolygon& a, const ConvexPolygon& b)
{
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

ConvexPolygon minkowski_dilate(const ConvexPolygon& poly, double eps, int arc_segments)
{
    if (eps < 0.0 || !std::isfinite(eps))
        throw Error(Errc::NegativeEpsilon, "dilation radius must be nonnegative");
    if (arc_segments < 1)
        throw Error(Errc::InvalidArgument, "arc_segments must be at least 1");
    if (eps == 0.0)
        return poly;

    const auto normals = edge_normals(poly);
    const std::size_t n = poly.size();
    std::vector<Vec2> out;
    out.reserve(n * static_cast<std::size_t>(arc_segments + 1));
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 in = normals[(i + n - 1) % n].normal;
        const Vec2 outn = normals[i].normal;
        const double start = std::atan2(in.y, in.x);
        const double turn = std::atan2(cross(in, outn), dot(in, outn));
        const Vec2 v = poly.vertex(i);
        if (turn <= 0.0) {
            out.push_back(v + eps * outn);
            continue;
        }
        for (int k = 0; k <= arc_segments; ++k) {
            const double phi = start + turn * static_cast<double>(k) / arc_segments;
            out.push_back(v + eps * Vec2{std::cos(phi), std::sin(phi)});
        }
    }
    return ConvexPolygon::from_ccw(std::move(out));
}

ConvexPolygon scale_about(const ConvexPolygon& poly, Vec2 center, double alpha)
{
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw Error(Errc::NonPositiveScale, "scale factor must be positive");
    std::vector<Vec2> v;
    v.reserve(poly.size());
    for (const Vec2& p : poly.vertices())
        v.push_back(center + alpha * (p - center));
    return ConvexPolygon::from_ccw(std::move(v));
}

ConvexPolygon translate(const ConvexPolygon& poly, Vec2 offset)
{
    std::vector<Vec2> v;
    v.reserve(poly.size());
    for (const Vec2& p : poly.vertices())
        v.push_back(p + offset);
    return ConvexPolygon::from_ccw(std::move(v));
}

bool contains(const ConvexPolygon& outer, Vec2 p)
{
    return boundary_clearance(outer, p) >= -kGeomEps * outer.diameter();
}

bool contains(const ConvexPolygon& outer, const ConvexPolygon& inner)
{
    return std::all_of(inner.vertices().begin(), inner.vertices().end(),
                       [&](Vec2 p) { return contains(outer, p); });
}

RadialFunction radial_parametrization(const ConvexPolygon& poly, int n_theta)
{
    return radial_parametrization(poly, n_theta, inradius_center(poly).center);
}

RadialFunction radial_parametrization(const ConvexPolygon& poly, int n_theta, Vec2 center)
{
    if (n_theta < 8)
        throw Error(Errc::InvalidArgument, "radial resolution must be at least 8");
    if (boundary_clearance(poly, center) <= 0.0)
        throw Error(Errc::InvalidArgument, "radial center must be interior");
    const auto lines = edge_lines(poly);
    RadialFunction r{center, std::vector<double>(static_cast<std::size_t>(n_theta))};
    for (std::size_t i = 0; i < r.samples.size(); ++i) {
        const Vec2 d = r.direction(i);
        double t = std::numeric_limits<double>::infinity();
        for (const EdgeLine& l : lines) {
            const double rate = dot(l.normal, d);
            if (rate > 0.0)
                t = std::min(t, (l.offset - dot(l.normal, r.center)) / rate);
        }
        r.samples[i] = t;
    }
    return r;
}

ConvexPolygon reconstruct(const RadialFunction& radial)
{
    std::vector<Vec2> pts;
    pts.reserve(radial.size());
    for (std::size_t i = 0; i < radial.size(); ++i)
        pts.push_back(radial.center + radial.samples[i] * radial.direction(i));
    return convex_hull(pts);
}

BonnesenReport bonnesen_check(const ConvexPolygon& poly)
{
    const double rho = inradius_center(poly).radius;
    return {poly.area(), poly.perimeter(), rho, rho * poly.perimeter() - poly.area()};
}

ConvexPolygon clip_to_box(const ConvexPolygon& poly, const Box& box)
{
    std::vector<Vec2> loop(poly.vertices().begin(), poly.vertices().end());
    loop = clip_halfplane(loop, {-1.0, 0.0}, -box.lower().x);
    loop = clip_halfplane(loop, {1.0, 0.0}, box.upper().x);
    loop = clip_halfplane(loop, {0.0, -1.0}, -box.lower().y);
    loop = clip_halfplane(loop, {0.0, 1.0}, box.upper().y);
    return convex_hull(loop);
}

ConvexPolygon project_to_class(const ConvexPolygon& poly, const Box& box, double m, double tol)
{
    return project_to_class(poly.vertices(), box, m, tol);
}

ConvexPolygon project_to_class(std::span<const Vec2> points, const Box& box, double m, double tol)
{
    if (!(m > 0.0) || !(tol > 0.0))
        throw Error(Errc::InvalidArgument, "volume and tolerance must be positive");
    if (m > box.area())
        throw Error(Errc::InfeasibleVolume, "prescribed volume exceeds the box area");

    ConvexPolygon p = clip_to_box(convex_hull(points), box);
    for (int it = 0; it < 200; ++it) {
        const double a = p.area();
        if (std::abs(a - m) <= tol * m)
            return p;
        const Vec2 c = inradius_center(p).center;
        p = clip_to_box(scale_about(p, c, std::sqrt(m / a)), box);
    }
    throw Error(Errc::NonConvergence, "volume projection did not reach its fixed point");
}

std::vector<EdgeNormal> edge_normals(const ConvexPolygon& poly)
{
    std::vector<EdgeNormal> out;
    out.reserve(poly.size());
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2 e = poly.vertex(i + 1) - poly.vertex(i);
        const double len = norm(e);
        out.push_back({(1.0 / len) * Vec2{e.y, -e.x}, len});
    }
    return out;
}

ConvexPolygon regular_polygon(int n, double radius, Vec2 center, double phase)
{
    if (n < 3 || !(radius > 0.0))
        throw Error(Errc::InvalidArgument, "regular polygon needs n >= 3 and positive radius");
    std::vector<Vec2> v;
    v.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double t = phase + 2.0 * std::numbers::pi * i / n;
        v.push_back(center + radius * Vec2{std::cos(t), std::sin(t)});
    }
    return ConvexPolygon::from_ccw(std::move(v));
}

ConvexPolygon regular_polygon_with_area(int n, double area, Vec2 center)
{
    if (n < 3 || !(area > 0.0))
        throw Error(Errc::InvalidArgument, "regular polygon needs n >= 3 and positive area");
    const double r = std::sqrt(2.0 * area / (n * std::sin(2.0 * std::numbers::pi / n)));
    return regular_polygon(n, r, center);
}

ConvexPolygon box_polygon(const Box& box)
{
    const Vec2 lo = box.lower();
    const Vec2 hi = box.upper();
    return ConvexPolygon::from_ccw({lo, {hi.x, lo.y}, hi, {lo.x, hi.y}});
}

} // namespace shapeopt
