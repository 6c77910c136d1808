#pragma once

#include "shapeopt/geometry.hpp"

#include <array>
#include <vector>

namespace shapeopt {

/// Conforming triangulation of a convex polygon. Triangles are counter-clockwise.
struct TriangleMesh {
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> triangles;
    std::vector<int> boundary_nodes;  ///< sorted
    std::vector<char> on_boundary;    ///< per node
    double h = 0.0;

    std::size_t interior_count() const { return nodes.size() - boundary_nodes.size(); }
    double triangle_area(std::size_t t) const;
    double total_area() const;
    double max_edge_length() const;
    /// Smallest interior angle over all triangles, in degrees.
    double min_angle_degrees() const;
    std::size_t edge_count() const;
};

inline constexpr double kMinMeshAngleDegrees = 20.0;

/// Boundary subdivided into segments of length <= h, interior seeded by a
/// triangular lattice and Delaunay-triangulated, then refined until every
/// angle is >= 20 degrees and every edge <= 1.5 h.
/// Throws MeshQualityFailure when the quality bounds cannot be met.
TriangleMesh triangulate(const ConvexPolygon& poly, double h);

} // namespace shapeopt
