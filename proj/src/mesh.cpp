#include "shapeopt/mesh.hpp"

#include "shapeopt/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <utility>

namespace shapeopt {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kRefineAngleDegrees = 21.0;
constexpr double kMaxEdgeFactor = 1.5;
constexpr double kLatticeClearance = 0.5;

/// Positive when d lies strictly inside the circumcircle of the CCW triangle abc.
double incircle(Vec2 a, Vec2 b, Vec2 c, Vec2 d)
{
    const double adx = a.x - d.x, ady = a.y - d.y;
    const double bdx = b.x - d.x, bdy = b.y - d.y;
    const double cdx = c.x - d.x, cdy = c.y - d.y;
    const double ad = adx * adx + ady * ady;
    const double bd = bdx * bdx + bdy * bdy;
    const double cd = cdx * cdx + cdy * cdy;
    return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

Vec2 circumcenter(Vec2 a, Vec2 b, Vec2 c)
{
    const Vec2 ab = b - a;
    const Vec2 ac = c - a;
    const double d = 2.0 * cross(ab, ac);
    const double b2 = dot(ab, ab);
    const double c2 = dot(ac, ac);
    return a + (1.0 / d) * Vec2{ac.y * b2 - ab.y * c2, ab.x * c2 - ac.x * b2};
}

double min_angle(Vec2 a, Vec2 b, Vec2 c)
{
    auto angle = [](Vec2 p, Vec2 q, Vec2 r) {
        const Vec2 u = q - p;
        const Vec2 v = r - p;
        return std::atan2(std::abs(cross(u, v)), dot(u, v));
    };
    return std::min({angle(a, b, c), angle(b, c, a), angle(c, a, b)});
}

double max_edge(Vec2 a, Vec2 b, Vec2 c) { return std::max({distance(a, b), distance(b, c), distance(c, a)}); }

/// Incremental Bowyer-Watson triangulation inside a large enclosing triangle.
/// The first three points are the enclosing triangle's corners.
class Delaunay {
public:
    struct Tri {
        std::array<int, 3> v;
        std::array<int, 3> nb;  // neighbour across the edge opposite v[i]
        bool alive;
    };

    Delaunay(Vec2 center, double extent)
    {
        const double r = 50.0 * extent;
        for (int k = 0; k < 3; ++k) {
            const double t = std::numbers::pi / 2.0 + 2.0 * std::numbers::pi * k / 3.0;
            points.push_back(center + r * Vec2{std::cos(t), std::sin(t)});
            boundary.push_back(0);
        }
        tris.push_back({{0, 1, 2}, {-1, -1, -1}, true});
        duplicate_tol_ = 1e-12 * extent;
    }

    int insert(Vec2 p, bool on_boundary)
    {
        const int t0 = locate(p);
        for (int v : tris[t0].v)
            if (distance(points[v], p) <= duplicate_tol_)
                return v;

        const int id = static_cast<int>(points.size());
        points.push_back(p);
        boundary.push_back(on_boundary ? 1 : 0);

        ++stamp_;
        mark_.resize(tris.size(), 0);
        std::vector<int> stack{t0};
        cavity_.clear();
        mark_[t0] = stamp_;
        while (!stack.empty()) {
            const int c = stack.back();
            stack.pop_back();
            cavity_.push_back(c);
            for (int n : tris[c].nb) {
                if (n < 0 || mark_[n] == stamp_)
                    continue;
                const auto& v = tris[n].v;
                if (incircle(points[v[0]], points[v[1]], points[v[2]], p) > 0.0) {
                    mark_[n] = stamp_;
                    stack.push_back(n);
                }
            }
        }

        rim_.clear();
        for (int c : cavity_) {
            const Tri& tri = tris[c];
            for (int i = 0; i < 3; ++i) {
                const int n = tri.nb[i];
                if (n < 0 || mark_[n] != stamp_)
                    rim_.push_back({tri.v[(i + 1) % 3], tri.v[(i + 2) % 3], n, c});
            }
        }
        for (int c : cavity_)
            tris[c].alive = false;

        const int first = static_cast<int>(tris.size());
        for (const RimEdge& e : rim_) {
            const int idx = static_cast<int>(tris.size());
            tris.push_back({{e.a, e.b, id}, {-1, -1, e.outside}, true});
            if (e.outside >= 0)
                for (int& n : tris[e.outside].nb)
                    if (n == e.old)
                        n = idx;
        }
        const int last = static_cast<int>(tris.size());
        for (int t = first; t < last; ++t) {
            Tri& tri = tris[t];
            for (int s = first; s < last; ++s) {
                if (tris[s].v[0] == tri.v[1])
                    tri.nb[0] = s;  // shares edge (b, p)
                if (tris[s].v[1] == tri.v[0])
                    tri.nb[1] = s;  // shares edge (p, a)
            }
        }
        mark_.resize(tris.size(), 0);
        last_ = first;
        return id;
    }

    bool is_super(int v) const { return v < 3; }

    std::vector<Vec2> points;
    std::vector<char> boundary;
    std::vector<Tri> tris;

private:
    struct RimEdge {
        int a, b, outside, old;
    };

    // orient() evaluated in index order so that side(a, b) == -side(b, a) exactly.
    double side(int a, int b, Vec2 p) const
    {
        return a < b ? orient(points[a], points[b], p) : -orient(points[b], points[a], p);
    }

    int locate(Vec2 p) const
    {
        int t = last_;
        for (std::size_t step = 0; step < 4 * tris.size() + 16; ++step) {
            const Tri& tri = tris[t];
            bool moved = false;
            for (int k = 0; k < 3; ++k) {
                const int i = static_cast<int>((k + step) % 3);
                if (side(tri.v[(i + 1) % 3], tri.v[(i + 2) % 3], p) < 0.0 && tri.nb[i] >= 0) {
                    t = tri.nb[i];
                    moved = true;
                    break;
                }
            }
            if (!moved)
                return t;
        }
        // Walk did not settle: take the live triangle whose worst edge test is
        // best, which tolerates points lying on an edge.
        int best = -1;
        double best_score = -std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < tris.size(); ++s) {
            const Tri& tri = tris[s];
            if (!tri.alive)
                continue;
            double score = std::numeric_limits<double>::infinity();
            for (int i = 0; i < 3; ++i) {
                const Vec2 a = points[tri.v[i]];
                const Vec2 b = points[tri.v[(i + 1) % 3]];
                score = std::min(score, orient(a, b, p) / std::max(distance(a, b), 1e-300));
            }
            if (score > best_score) {
                best_score = score;
                best = static_cast<int>(s);
            }
        }
        if (best >= 0 && best_score >= -1e3 * duplicate_tol_)
            return best;
        throw Error(Errc::MeshQualityFailure, "point location failed");
    }

    int last_ = 0;
    int stamp_ = 0;
    double duplicate_tol_ = 0.0;
    std::vector<int> mark_;
    std::vector<int> cavity_;
    std::vector<RimEdge> rim_;
};

struct Segment {
    int a, b;
};

class Mesher {
public:
    Mesher(const ConvexPolygon& poly, double h)
        : poly_(poly), h_(h), dt_(inradius_center(poly).center, poly.diameter())
    {
    }

    TriangleMesh run()
    {
        seed_boundary();
        seed_interior();
        refine();
        return export_mesh();
    }

private:
    void seed_boundary()
    {
        std::vector<int> ids;
        for (std::size_t i = 0; i < poly_.size(); ++i) {
            const Vec2 a = poly_.vertex(i);
            const Vec2 e = poly_.vertex(i + 1) - a;
            const int k = std::max(1, static_cast<int>(std::ceil(norm(e) / h_ - 1e-9)));
            for (int j = 0; j < k; ++j)
                ids.push_back(dt_.insert(a + (static_cast<double>(j) / k) * e, true));
        }
        for (std::size_t i = 0; i < ids.size(); ++i)
            segments_.push_back({ids[i], ids[(i + 1) % ids.size()]});
    }

    void seed_interior()
    {
        const Vec2 anchor = inradius_center(poly_).center;
        const auto [lo, hi] = poly_.bounding_box();
        const double dy = h_ * std::sqrt(3.0) / 2.0;
        const int j0 = static_cast<int>(std::floor((lo.y - anchor.y) / dy));
        const int j1 = static_cast<int>(std::ceil((hi.y - anchor.y) / dy));
        const int i0 = static_cast<int>(std::floor((lo.x - anchor.x) / h_)) - 1;
        const int i1 = static_cast<int>(std::ceil((hi.x - anchor.x) / h_)) + 1;
        for (int j = j0; j <= j1; ++j) {
            const double shift = (j % 2 != 0) ? 0.5 * h_ : 0.0;
            for (int i = i0; i <= i1; ++i) {
                const Vec2 p{anchor.x + i * h_ + shift, anchor.y + j * dy};
                if (boundary_clearance(poly_, p) >= kLatticeClearance * h_)
                    dt_.insert(p, false);
            }
        }
        initial_points_ = dt_.points.size();
    }

    bool is_bad(const Delaunay::Tri& t) const
    {
        const Vec2 a = dt_.points[t.v[0]];
        const Vec2 b = dt_.points[t.v[1]];
        const Vec2 c = dt_.points[t.v[2]];
        return min_angle(a, b, c) < kRefineAngleDegrees * kDeg || max_edge(a, b, c) > kMaxEdgeFactor * h_;
    }

    bool interior_triangle(const Delaunay::Tri& t) const
    {
        return t.alive && !dt_.is_super(t.v[0]) && !dt_.is_super(t.v[1]) && !dt_.is_super(t.v[2]);
    }

    // Index of the boundary segment to split for a circumcenter, or -1 to insert it.
    int encroached_segment(Vec2 cc) const
    {
        int best = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < segments_.size(); ++s) {
            const Vec2 a = dt_.points[segments_[s].a];
            const Vec2 b = dt_.points[segments_[s].b];
            const double half = 0.5 * distance(a, b);
            const double ratio = distance(cc, 0.5 * (a + b)) / half;
            if (ratio < 1.0 && ratio < best_ratio) {
                best_ratio = ratio;
                best = static_cast<int>(s);
            }
        }
        if (best >= 0 || boundary_clearance(poly_, cc) > 1e-9 * h_)
            return best;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < segments_.size(); ++s) {
            const Vec2 a = dt_.points[segments_[s].a];
            const Vec2 b = dt_.points[segments_[s].b];
            const Vec2 ab = b - a;
            const double t = std::clamp(dot(cc - a, ab) / dot(ab, ab), 0.0, 1.0);
            const double d = distance(cc, a + t * ab);
            if (d < best_dist) {
                best_dist = d;
                best = static_cast<int>(s);
            }
        }
        return best;
    }

    void refine()
    {
        const std::size_t cap = 4 * initial_points_ + 2000;
        for (;;) {
            std::vector<int> bad;
            for (std::size_t t = 0; t < dt_.tris.size(); ++t)
                if (interior_triangle(dt_.tris[t]) && is_bad(dt_.tris[t]))
                    bad.push_back(static_cast<int>(t));
            if (bad.empty())
                return;
            for (int t : bad) {
                const Delaunay::Tri& tri = dt_.tris[t];
                if (!tri.alive)
                    continue;
                const Vec2 cc = circumcenter(dt_.points[tri.v[0]], dt_.points[tri.v[1]], dt_.points[tri.v[2]]);
                const int s = encroached_segment(cc);
                if (s >= 0) {
                    const Segment seg = segments_[s];
                    const int mid = dt_.insert(0.5 * (dt_.points[seg.a] + dt_.points[seg.b]), true);
                    segments_[s] = {seg.a, mid};
                    segments_.push_back({mid, seg.b});
                } else {
                    dt_.insert(cc, false);
                }
                if (dt_.points.size() > cap)
                    throw Error(Errc::MeshQualityFailure, "quality refinement exceeded its point budget");
            }
        }
    }

    TriangleMesh export_mesh() const
    {
        TriangleMesh mesh;
        mesh.h = h_;
        mesh.nodes.assign(dt_.points.begin() + 3, dt_.points.end());
        mesh.on_boundary.assign(dt_.boundary.begin() + 3, dt_.boundary.end());
        for (const auto& t : dt_.tris)
            if (interior_triangle(t))
                mesh.triangles.push_back({t.v[0] - 3, t.v[1] - 3, t.v[2] - 3});
        for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
            if (mesh.on_boundary[i])
                mesh.boundary_nodes.push_back(static_cast<int>(i));

        const double tiny = 1e-14 * h_ * h_;
        for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
            if (!(mesh.triangle_area(t) > tiny))
                throw Error(Errc::MeshQualityFailure, "degenerate or inverted triangle");
        if (std::abs(mesh.total_area() - poly_.area()) > 1e-9 * poly_.area())
            throw Error(Errc::MeshQualityFailure, "triangulation does not cover the polygon");
        if (mesh.min_angle_degrees() < kMinMeshAngleDegrees)
            throw Error(Errc::MeshQualityFailure, "minimum angle bound not reached");
        return mesh;
    }

    const ConvexPolygon& poly_;
    double h_;
    Delaunay dt_;
    std::vector<Segment> segments_;
    std::size_t initial_points_ = 0;
};

} // namespace

double TriangleMesh::triangle_area(std::size_t t) const
{
    const auto& tri = triangles[t];
    return 0.5 * orient(nodes[tri[0]], nodes[tri[1]], nodes[tri[2]]);
}

double TriangleMesh::total_area() const
{
    double a = 0.0;
    for (std::size_t t = 0; t < triangles.size(); ++t)
        a += triangle_area(t);
    return a;
}

double TriangleMesh::max_edge_length() const
{
    double m = 0.0;
    for (const auto& t : triangles)
        m = std::max(m, max_edge(nodes[t[0]], nodes[t[1]], nodes[t[2]]));
    return m;
}

double TriangleMesh::min_angle_degrees() const
{
    double m = 180.0;
    for (const auto& t : triangles)
        m = std::min(m, min_angle(nodes[t[0]], nodes[t[1]], nodes[t[2]]) / kDeg);
    return m;
}

std::size_t TriangleMesh::edge_count() const
{
    std::set<std::pair<int, int>> edges;
    for (const auto& t : triangles)
        for (int i = 0; i < 3; ++i)
            edges.emplace(std::minmax(t[i], t[(i + 1) % 3]));
    return edges.size();
}

TriangleMesh triangulate(const ConvexPolygon& poly, double h)
{
    if (!(h > 0.0) || h > poly.diameter() / 2.0 * (1.0 + 1e-12))
        throw Error(Errc::InvalidArgument, "mesh size must lie in (0, diameter/2]");
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2 in = poly.vertex(i) - poly.vertex(i + poly.size() - 1);
        const Vec2 out = poly.vertex(i + 1) - poly.vertex(i);
        const double turn = std::atan2(cross(in, out), dot(in, out));
        if (std::numbers::pi - turn < kMinMeshAngleDegrees * kDeg)
            throw Error(Errc::MeshQualityFailure, "polygon corner sharper than the minimum mesh angle");
    }
    return Mesher(poly, h).run();
}

} // namespace shapeopt
