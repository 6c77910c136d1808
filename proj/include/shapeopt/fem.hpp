#pragma once

#include "shapeopt/expr.hpp"
#include "shapeopt/geometry.hpp"
#include "shapeopt/mesh.hpp"

#include <cstdint>
#include <vector>

namespace shapeopt {

/// Smallest Dirichlet eigenvalues, ascending.
struct Spectrum {
    std::vector<double> eigenvalues;
    int k = 0;
    double h = 0.0;
    std::size_t dof = 0;
    int iterations = 0;
};

struct FieldSolution {
    TriangleMesh mesh;
    std::vector<double> u;         ///< nodal values, zero on boundary nodes
    std::vector<Vec2> gradients;   ///< per triangle
    double energy = 0.0;           ///< (L u, u)
    double load_work = 0.0;        ///< (f, u)
    double relative_residual = 0.0;
};

struct EigenOptions {
    int max_iterations = 2000;
    double tolerance = 1e-10;
    std::uint64_t seed = 0x5EED;
};

/// Dirichlet eigenvalues of -div(A grad u) + c0 u on a mesh of poly.
Spectrum eigenvalues(const ConvexPolygon& poly, const CoefficientField& coeff, int k, double h,
                     const EigenOptions& options = {});
Spectrum eigenvalues(const TriangleMesh& mesh, const CoefficientField& coeff, int k,
                     const EigenOptions& options = {});

/// Galerkin solution of L u = f with homogeneous Dirichlet data.
FieldSolution solve_source(const ConvexPolygon& poly, const CoefficientField& coeff, const Expr& f, double h);
FieldSolution solve_source(TriangleMesh mesh, const CoefficientField& coeff, const Expr& f);

/// Centroid-rule integral of j(x, u, Du) over the mesh.
double integral_functional(const FieldSolution& sol, const Expr& j);

} // namespace shapeopt
