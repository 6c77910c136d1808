#include "shapeopt/fem.hpp"

#include "shapeopt/error.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <random>

namespace shapeopt {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplets = std::vector<Eigen::Triplet<double>>;

struct Element {
    std::array<Vec2, 3> grad;  // gradients of the barycentric basis
    double area;
    std::array<Vec2, 3> midpoints;  // midpoint of the edge opposite vertex i
};

Element element(const TriangleMesh& mesh, std::size_t t)
{
    const auto& tri = mesh.triangles[t];
    const Vec2 p0 = mesh.nodes[tri[0]];
    const Vec2 p1 = mesh.nodes[tri[1]];
    const Vec2 p2 = mesh.nodes[tri[2]];
    const double twice = orient(p0, p1, p2);
    Element e;
    e.area = 0.5 * twice;
    // grad(phi_i) = rot(opposite edge) / (2 area)
    const std::array<Vec2, 3> p{p0, p1, p2};
    for (int i = 0; i < 3; ++i) {
        const Vec2 a = p[(i + 1) % 3];
        const Vec2 b = p[(i + 2) % 3];
        e.grad[i] = (1.0 / twice) * Vec2{a.y - b.y, b.x - a.x};
        e.midpoints[i] = 0.5 * (a + b);
    }
    return e;
}

struct DofMap {
    std::vector<int> index;  // node -> dof or -1
    std::size_t count = 0;

    explicit DofMap(const TriangleMesh& mesh) : index(mesh.nodes.size(), -1)
    {
        for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
            if (!mesh.on_boundary[i])
                index[i] = static_cast<int>(count++);
    }
};

struct System {
    SpMat stiffness;  // energy form including the zero-order term
    SpMat mass;
};

// Edge-midpoint quadrature; phi_i is 1/2 at the two midpoints adjacent to vertex i.
System assemble(const TriangleMesh& mesh, const DofMap& dofs, const CoefficientField& coeff)
{
    Triplets kt;
    Triplets mt;
    kt.reserve(9 * mesh.triangles.size());
    mt.reserve(9 * mesh.triangles.size());
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const Element e = element(mesh, t);
        double a11 = 0.0, a12 = 0.0, a22 = 0.0;
        std::array<double, 3> c0{};
        for (int q = 0; q < 3; ++q) {
            const auto s = coeff.at(e.midpoints[q]);
            a11 += s.a11 / 3.0;
            a12 += s.a12 / 3.0;
            a22 += s.a22 / 3.0;
            c0[q] = s.c0;
        }
        const auto& tri = mesh.triangles[t];
        for (int i = 0; i < 3; ++i) {
            const int di = dofs.index[tri[i]];
            if (di < 0)
                continue;
            for (int j = 0; j < 3; ++j) {
                const int dj = dofs.index[tri[j]];
                if (dj < 0)
                    continue;
                const Vec2 gi = e.grad[i];
                const Vec2 gj = e.grad[j];
                const double k = e.area * (gi.x * (a11 * gj.x + a12 * gj.y) + gi.y * (a12 * gj.x + a22 * gj.y));
                double m = 0.0;
                double z = 0.0;
                for (int q = 0; q < 3; ++q) {
                    if (q == i || q == j)
                        continue;
                    // midpoint q is adjacent to both i and j
                    m += 0.25;
                    z += 0.25 * c0[q];
                }
                m *= e.area / 3.0;
                z *= e.area / 3.0;
                kt.emplace_back(di, dj, k + z);
                mt.emplace_back(di, dj, m);
            }
        }
    }
    System s;
    const auto n = static_cast<Eigen::Index>(dofs.count);
    s.stiffness.resize(n, n);
    s.mass.resize(n, n);
    s.stiffness.setFromTriplets(kt.begin(), kt.end());
    s.mass.setFromTriplets(mt.begin(), mt.end());
    return s;
}

void check_coefficients(const TriangleMesh& mesh, const CoefficientField& coeff)
{
    Vec2 lo = mesh.nodes.front();
    Vec2 hi = lo;
    for (const Vec2& p : mesh.nodes) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    coeff.check_ellipticity(lo, hi);
}

} // namespace

Spectrum eigenvalues(const ConvexPolygon& poly, const CoefficientField& coeff, int k, double h,
                     const EigenOptions& options)
{
    if (k < 1)
        throw Error(Errc::InvalidArgument, "eigenvalue count must be at least 1");
    return eigenvalues(triangulate(poly, h), coeff, k, options);
}

Spectrum eigenvalues(const TriangleMesh& mesh, const CoefficientField& coeff, int k, const EigenOptions& options)
{
    const DofMap dofs(mesh);
    if (k < 1 || static_cast<std::size_t>(k) * 4 > dofs.count)
        throw Error(Errc::InvalidArgument, "eigenvalue count must satisfy 1 <= k <= dof/4");
    check_coefficients(mesh, coeff);

    const System sys = assemble(mesh, dofs, coeff);
    Eigen::SimplicialLDLT<SpMat> factor(sys.stiffness);
    if (factor.info() != Eigen::Success)
        throw Error(Errc::SingularSystem, "factorization of the stiffness matrix failed");

    const auto n = static_cast<Eigen::Index>(dofs.count);
    const Eigen::Index block = std::min<Eigen::Index>(k + 4, n);

    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::MatrixXd x(n, block);
    for (Eigen::Index j = 0; j < block; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            x(i, j) = dist(rng);

    Eigen::VectorXd previous = Eigen::VectorXd::Constant(k, std::numeric_limits<double>::infinity());
    for (int it = 1; it <= options.max_iterations; ++it) {
        const Eigen::MatrixXd y = factor.solve(sys.mass * x);
        const Eigen::MatrixXd ay = sys.stiffness * y;
        const Eigen::MatrixXd my = sys.mass * y;
        Eigen::MatrixXd ar = y.transpose() * ay;
        Eigen::MatrixXd mr = y.transpose() * my;
        ar = 0.5 * (ar + ar.transpose()).eval();
        mr = 0.5 * (mr + mr.transpose()).eval();

        // Rayleigh-Ritz on span(Y): Ritz vectors are M-orthonormal, so each
        // one minimizes the quotient over the complement of its predecessors.
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ritz(ar, mr);
        if (ritz.info() != Eigen::Success)
            throw Error(Errc::SolverNonConvergence, "Rayleigh-Ritz projection failed");
        x = y * ritz.eigenvectors();
        const Eigen::VectorXd current = ritz.eigenvalues().head(k);

        const double change = ((current - previous).cwiseAbs().array() / current.cwiseAbs().array()).maxCoeff();
        previous = current;
        if (change < options.tolerance) {
            Spectrum s;
            s.eigenvalues.assign(current.data(), current.data() + k);
            s.k = k;
            s.h = mesh.h;
            s.dof = dofs.count;
            s.iterations = it;
            return s;
        }
    }
    throw Error(Errc::SolverNonConvergence, "subspace iteration hit its iteration cap");
}

FieldSolution solve_source(const ConvexPolygon& poly, const CoefficientField& coeff, const Expr& f, double h)
{
    return solve_source(triangulate(poly, h), coeff, f);
}

FieldSolution solve_source(TriangleMesh mesh, const CoefficientField& coeff, const Expr& f)
{
    if (!f.free_variables().subset_of(kSpatialVars))
        throw Error(Errc::UnknownIdentifier, "source term may only depend on x1, x2");
    check_coefficients(mesh, coeff);
    // f must be finite at every node; eval throws NonFiniteResult otherwise.
    for (const Vec2& p : mesh.nodes)
        f.eval({{Var::x1, p.x}, {Var::x2, p.y}});

    const DofMap dofs(mesh);
    const System sys = assemble(mesh, dofs, coeff);
    const auto n = static_cast<Eigen::Index>(dofs.count);

    Eigen::VectorXd load = Eigen::VectorXd::Zero(n);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const Element e = element(mesh, t);
        std::array<double, 3> fq{};
        for (int q = 0; q < 3; ++q)
            fq[q] = f.eval({{Var::x1, e.midpoints[q].x}, {Var::x2, e.midpoints[q].y}});
        const auto& tri = mesh.triangles[t];
        for (int i = 0; i < 3; ++i) {
            const int di = dofs.index[tri[i]];
            if (di < 0)
                continue;
            double acc = 0.0;
            for (int q = 0; q < 3; ++q)
                if (q != i)
                    acc += 0.5 * fq[q];
            load[di] += e.area / 3.0 * acc;
        }
    }

    FieldSolution sol;
    sol.u.assign(mesh.nodes.size(), 0.0);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    if (n > 0) {
        Eigen::SimplicialLDLT<SpMat> factor(sys.stiffness);
        if (factor.info() != Eigen::Success)
            throw Error(Errc::SingularSystem, "factorization of the stiffness matrix failed");
        u = factor.solve(load);
        if (factor.info() != Eigen::Success || !u.allFinite())
            throw Error(Errc::SingularSystem, "triangular solves failed");
        const double bnorm = load.norm();
        sol.relative_residual = bnorm > 0.0 ? (sys.stiffness * u - load).norm() / bnorm : (sys.stiffness * u).norm();
        if (sol.relative_residual > 1e-10)
            throw Error(Errc::SingularSystem, "discrete residual above 1e-10");
        sol.energy = u.dot(sys.stiffness * u);
        sol.load_work = u.dot(load);
    }
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
        if (dofs.index[i] >= 0)
            sol.u[i] = u[dofs.index[i]];

    sol.gradients.reserve(mesh.triangles.size());
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const Element e = element(mesh, t);
        Vec2 g;
        for (int i = 0; i < 3; ++i)
            g += sol.u[mesh.triangles[t][i]] * e.grad[i];
        sol.gradients.push_back(g);
    }
    sol.mesh = std::move(mesh);
    return sol;
}

double integral_functional(const FieldSolution& sol, const Expr& j)
{
    if (!j.free_variables().subset_of(kIntegrandVars))
        throw Error(Errc::UnknownIdentifier, "integrand may only depend on x1, x2, u, ux, uy");
    const TriangleMesh& mesh = sol.mesh;
    double total = 0.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        const Vec2 c = (1.0 / 3.0) * (mesh.nodes[tri[0]] + mesh.nodes[tri[1]] + mesh.nodes[tri[2]]);
        const double uc = (sol.u[tri[0]] + sol.u[tri[1]] + sol.u[tri[2]]) / 3.0;
        const Vec2 g = sol.gradients[t];
        const Bindings b{{Var::x1, c.x}, {Var::x2, c.y}, {Var::u, uc}, {Var::ux, g.x}, {Var::uy, g.y}};
        total += mesh.triangle_area(t) * j.eval(b);
    }
    return total;
}

} // namespace shapeopt
