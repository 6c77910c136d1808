#include "shapeopt/functionals.hpp"

#include "shapeopt/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace shapeopt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double positive_cube(double x)
{
    const double p = 0.5 * (std::abs(x) + x);
    return p * p * p;
}

} // namespace

void RadialProfile::validate() const
{
    if (!(radius > 0.0) || !(max_height >= 0.0) || heights.size() < 2)
        throw Error(Errc::InvalidProfile, "profile needs R > 0, M >= 0 and at least one cell");
    const double bound_tol = 1e-12 * std::max(max_height, 1.0);
    for (std::size_t i = 0; i < heights.size(); ++i) {
        const double u = heights[i];
        if (!std::isfinite(u) || u < -bound_tol || u > max_height + bound_tol)
            throw Error(Errc::InvalidProfile, "height " + std::to_string(i) + " outside [0, M]");
        if (i + 1 < heights.size() && heights[i + 1] > u + 1e-12)
            throw Error(Errc::InvalidProfile, "profile increases at cell " + std::to_string(i));
        if (i > 0 && i + 1 < heights.size() && heights[i + 1] - 2.0 * u + heights[i - 1] > 1e-12 * radius)
            throw Error(Errc::InvalidProfile, "profile is not concave at node " + std::to_string(i));
    }
}

RadialProfile RadialProfile::flat(double radius, double height, int n_r)
{
    return truncated_cone(radius, height, radius, n_r);
}

RadialProfile RadialProfile::cone(double radius, double height, int n_r)
{
    return truncated_cone(radius, height, 0.0, n_r);
}

RadialProfile RadialProfile::truncated_cone(double radius, double height, double r_top, int n_r)
{
    if (n_r < 1)
        throw Error(Errc::InvalidArgument, "profile needs at least one cell");
    RadialProfile p;
    p.radius = radius;
    p.max_height = height;
    p.heights.resize(static_cast<std::size_t>(n_r) + 1);
    for (int i = 0; i <= n_r; ++i) {
        const double r = radius * i / n_r;
        p.heights[i] = r <= r_top ? height : height * (radius - r) / (radius - r_top);
    }
    return p;
}

StreamDirection::StreamDirection(double x, double y, double z) : x_(x), y_(y), z_(z)
{
    if (std::abs(std::sqrt(x * x + y * y + z * z) - 1.0) > 1e-12)
        throw Error(Errc::InvalidArgument, "stream direction must be a unit vector");
}

double resistance_profile(const RadialProfile& p)
{
    p.validate();
    const double dr = p.step();
    double sum = 0.0;
    for (int i = 0; i < p.cells(); ++i) {
        const double s = p.slope(i);
        const double rmid = (i + 0.5) * dr;
        sum += rmid * dr / (1.0 + s * s);
    }
    return kTwoPi * sum;
}

double resistance_boundary_axisym(const RadialProfile& p, const StreamDirection& a)
{
    p.validate();
    if (std::abs(a.x()) > 1e-12 || std::abs(a.y()) > 1e-12 || std::abs(a.z() - 1.0) > 1e-12)
        throw Error(Errc::UnsupportedDirection, "only the axial stream direction (0, 0, 1) is supported");

    const double dr = p.step();
    double total = 0.0;
    // Upper surface: one conical frustum per cell, normal (-s e_r + e_z) / sqrt(1 + s^2).
    for (int i = 0; i < p.cells(); ++i) {
        const double s = p.slope(i);
        const double slant = dr * std::sqrt(1.0 + s * s);
        const double lateral = kTwoPi * (i + 0.5) * dr * slant;
        total += lateral * positive_cube(1.0 / std::sqrt(1.0 + s * s));
    }
    // Side wall at r = R (normal e_r) and base disk (normal -e_z).
    const double wall = kTwoPi * p.radius * p.heights.back();
    const double base = std::numbers::pi * p.radius * p.radius;
    total += wall * positive_cube(0.0) + base * positive_cube(-1.0);
    return total;
}

double boundary_functional_2d(const ConvexPolygon& poly, const Expr& f)
{
    if (!f.free_variables().subset_of(kBoundaryVars))
        throw Error(Errc::UnknownIdentifier, "boundary integrand may only depend on x1, x2, n1, n2");
    double total = 0.0;
    const auto normals = edge_normals(poly);
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2 mid = 0.5 * (poly.vertex(i) + poly.vertex(i + 1));
        const Vec2 n = normals[i].normal;
        total += normals[i].length * f.eval({{Var::x1, mid.x}, {Var::x2, mid.y}, {Var::n1, n.x}, {Var::n2, n.y}});
    }
    return total;
}

} // namespace shapeopt
