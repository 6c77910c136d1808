#pragma once

#include "shapeopt/expr.hpp"
#include "shapeopt/geometry.hpp"

#include <vector>

namespace shapeopt {

/// Concave, nonincreasing height profile u(r) on the disk of radius R,
/// sampled at r_i = i R / n_r for i = 0..n_r.
struct RadialProfile {
    double radius = 1.0;      ///< R
    double max_height = 1.0;  ///< M
    std::vector<double> heights;

    int cells() const { return static_cast<int>(heights.size()) - 1; }
    double step() const { return radius / cells(); }
    double slope(int i) const { return (heights[i + 1] - heights[i]) / step(); }

    /// Throws InvalidProfile when monotonicity, concavity or 0 <= u <= M fails.
    void validate() const;

    static RadialProfile flat(double radius, double height, int n_r);
    static RadialProfile cone(double radius, double height, int n_r);
    /// Flat top of radius r_top at height M, then linear down to 0 at R.
    static RadialProfile truncated_cone(double radius, double height, double r_top, int n_r);
};

/// Unit stream direction in R^3.
class StreamDirection {
public:
    StreamDirection() = default;
    StreamDirection(double x, double y, double z);

    double x() const { return x_; }
    double y() const { return y_; }
    double z() const { return z_; }

private:
    double x_ = 0.0, y_ = 0.0, z_ = 1.0;
};

/// Newton resistance in graph form: integral over the base disk of 1 / (1 + |Du|^2),
/// midpoint rule in r.
double resistance_profile(const RadialProfile& p);

/// Integral of ((nu . A)^+)^3 over the surface of the body of revolution under
/// the profile. Only A = e3 is supported.
double resistance_boundary_axisym(const RadialProfile& p, const StreamDirection& a = {});

/// Sum over edges of length * f(midpoint, outward normal); f may use x1, x2, n1, n2.
double boundary_functional_2d(const ConvexPolygon& poly, const Expr& f);

} // namespace shapeopt
