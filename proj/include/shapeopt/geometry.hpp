#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

namespace shapeopt {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
/// Twice the signed area of (a, b, c); positive for a left turn.
constexpr double orient(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
constexpr bool lex_less(Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

/// Relative convexity / containment tolerance.
inline constexpr double kGeomEps = 1e-12;

/// Axis-aligned box; the container D of the admissible class.
class Box {
public:
    Box(Vec2 lower, Vec2 upper);

    Vec2 lower() const { return lower_; }
    Vec2 upper() const { return upper_; }
    Vec2 center() const { return 0.5 * (lower_ + upper_); }
    double width() const { return upper_.x - lower_.x; }
    double height() const { return upper_.y - lower_.y; }
    double area() const { return width() * height(); }
    double perimeter() const { return 2.0 * (width() + height()); }

private:
    Vec2 lower_;
    Vec2 upper_;
};

/// A convex polygon with counter-clockwise vertices, starting from the
/// lexicographically smallest vertex. Immutable once built.
class ConvexPolygon {
public:
    /// Validates an already counter-clockwise vertex loop. Collinear vertices
    /// are kept; near-duplicate consecutive vertices are merged.
    static ConvexPolygon from_ccw(std::vector<Vec2> vertices);

    std::span<const Vec2> vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    Vec2 vertex(std::size_t i) const { return vertices_[i % vertices_.size()]; }

    double area() const { return area_; }
    double perimeter() const { return perimeter_; }
    double diameter() const { return diameter_; }
    Vec2 centroid() const;
    std::pair<Vec2, Vec2> bounding_box() const;

private:
    explicit ConvexPolygon(std::vector<Vec2> vertices);

    std::vector<Vec2> vertices_;
    double area_ = 0.0;
    double perimeter_ = 0.0;
    double diameter_ = 0.0;
};

struct RadialFunction {
    Vec2 center;
    std::vector<double> samples;  ///< radii at angles 2*pi*i/n

    std::size_t size() const { return samples.size(); }
    Vec2 direction(std::size_t i) const;
};

struct BonnesenReport {
    double area = 0.0;
    double perimeter = 0.0;
    double inradius = 0.0;
    double slack = 0.0;  ///< inradius * perimeter - area
};

struct InscribedBall {
    Vec2 center;
    double radius = 0.0;
};

struct EdgeNormal {
    Vec2 normal;  ///< unit outward normal
    double length = 0.0;
};

/// Strict convex hull of arbitrary points; drops interior and collinear points.
/// Throws DegenerateInput when the hull has no area.
ConvexPolygon convex_hull(std::span<const Vec2> points);

/// Builds a polygon from points that must be in convex position (any order).
/// Throws NonConvexInput when a point lies strictly inside the hull.
ConvexPolygon polygon_from_vertices(std::span<const Vec2> points);

inline double area(const ConvexPolygon& p) { return p.area(); }
inline double perimeter(const ConvexPolygon& p) { return p.perimeter(); }

/// Chebyshev center and radius; ties are broken towards the lexicographically
/// smallest center.
InscribedBall inradius_center(const ConvexPolygon& poly);

/// Distance from a point to a convex polygon (0 inside).
double point_distance(const ConvexPolygon& poly, Vec2 p);

/// Smallest signed distance from p to the edge lines; positive inside.
double boundary_clearance(const ConvexPolygon& poly, Vec2 p);

double hausdorff_distance(const ConvexPolygon& a, const ConvexPolygon& b);

/// Inner polygonal approximation of poly + B(eps): offset edges joined by
/// corner arcs with `arc_segments` chords each.
ConvexPolygon minkowski_dilate(const ConvexPolygon& poly, double eps, int arc_segments);

ConvexPolygon scale_about(const ConvexPolygon& poly, Vec2 center, double alpha);

ConvexPolygon translate(const ConvexPolygon& poly, Vec2 offset);

/// True iff every vertex of inner lies in outer, with eps_geom * diameter slack.
bool contains(const ConvexPolygon& outer, const ConvexPolygon& inner);
bool contains(const ConvexPolygon& outer, Vec2 p);

/// Radii at n_theta equally spaced angles about the Chebyshev center, or about
/// a given interior point.
RadialFunction radial_parametrization(const ConvexPolygon& poly, int n_theta);
RadialFunction radial_parametrization(const ConvexPolygon& poly, int n_theta, Vec2 center);

/// Polygon through the sampled boundary points (convex hull of them).
ConvexPolygon reconstruct(const RadialFunction& radial);

BonnesenReport bonnesen_check(const ConvexPolygon& poly);

/// Intersection of a convex polygon with a box; throws DegenerateInput when
/// the intersection has no area.
ConvexPolygon clip_to_box(const ConvexPolygon& poly, const Box& box);

/// Convex polygon inside `box` with |area - m| <= tol * m, by scale-and-clip
/// fixed point iteration starting from the convex hull of `points`.
ConvexPolygon project_to_class(std::span<const Vec2> points, const Box& box, double m,
                               double tol = 1e-9);
ConvexPolygon project_to_class(const ConvexPolygon& poly, const Box& box, double m,
                               double tol = 1e-9);

/// Per-edge outward unit normals; edge i runs from vertex i to vertex i+1.
std::vector<EdgeNormal> edge_normals(const ConvexPolygon& poly);

/// Regular n-gon inscribed in the circle of given radius, first vertex at angle `phase`.
ConvexPolygon regular_polygon(int n, double radius, Vec2 center = {}, double phase = 0.0);

/// Regular n-gon with the prescribed area.
ConvexPolygon regular_polygon_with_area(int n, double area, Vec2 center = {});

ConvexPolygon box_polygon(const Box& box);

} // namespace shapeopt
