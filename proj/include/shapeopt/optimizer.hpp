#pragma once

#include "shapeopt/error.hpp"
#include "shapeopt/expr.hpp"
#include "shapeopt/functionals.hpp"
#include "shapeopt/geometry.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace shapeopt {

/// Shape functional J(Omega) to minimize.
struct Objective {
    enum class Kind { eigenvalue, source_integral, boundary_integral };

    Kind kind = Kind::eigenvalue;
    int k = 1;  ///< eigenvalue index, 1-based
    CoefficientField coeff = CoefficientField::identity();
    std::optional<Expr> f;  ///< source term, or boundary integrand
    std::optional<Expr> j;  ///< integrand of the source functional

    static Objective eigenvalue(int k, CoefficientField coeff = CoefficientField::identity());
    static Objective source_integral(Expr f, Expr j, CoefficientField coeff = CoefficientField::identity());
    static Objective boundary_integral(Expr f);

    double evaluate(const ConvexPolygon& poly, double h) const;
};

struct ShapeProblem {
    Objective objective;
    Box box{{0.0, 0.0}, {1.0, 1.0}};
    double m = 0.5;
    int n_theta = 32;
    double h = 0.08;
    int budget = 500;
    std::uint64_t seed = 1;

    /// Throws InvalidArgument unless 0 < m <= area(D), n_theta >= 16, budget >= 1, h > 0.
    void validate() const;
};

struct TracePoint {
    int iteration;  ///< evaluation count when the value was accepted
    double value;
};

struct ProjectionStats {
    int projected = 0;  ///< candidates passed through project_to_class
    int rejected = 0;   ///< candidates whose projection or evaluation failed
    double max_area_error = 0.0;  ///< max |area - m| / m over evaluated bodies
};

struct OptResult {
    ConvexPolygon best;
    double best_value = 0.0;
    std::vector<TracePoint> trace;  ///< accepted values, nonincreasing
    ProjectionStats stats;
    int evaluations = 0;
    double final_step = 0.0;
};

/// Raised when the objective fails on the initial body or with a numeric
/// error mid-run; carries everything found so far.
class OptimizationAborted : public Error {
public:
    OptimizationAborted(std::string message, OptResult partial);
    const OptResult& partial() const { return partial_; }

private:
    OptResult partial_;
};

/// Cyclic coordinate search on the radii of a star-shaped parametrization,
/// starting from the disk of area m centered in the box. Every candidate is
/// pushed through project_to_class before evaluation. The observer, if set,
/// sees every evaluated body and its value.
using CandidateObserver = std::function<void(const ConvexPolygon&, double)>;
OptResult optimize(const ShapeProblem& problem, const CandidateObserver& observer = {});

/// Projection onto {0 <= u <= M, nonincreasing, concave}: alternates isotonic
/// regression of the slopes with clamping, up to 50 sweeps.
void project_profile(RadialProfile& p);

/// Projected coordinate descent on profile heights for Newton's problem.
RadialProfile newton_optimize_profile(double max_height, double radius, int n_r, int budget,
                                      std::uint64_t seed);

struct Selection {
    std::vector<std::vector<int>> levels;  ///< kept indices per ladder level, nested
    ConvexPolygon limit;                   ///< hull of the radial average of the last level
};

/// Blaschke-style selection: at each ladder level keeps the largest cluster of
/// bodies within eps/2 of one member, so kept bodies are pairwise within eps.
Selection blaschke_select(std::span<const ConvexPolygon> bodies, std::span<const double> ladder);

} // namespace shapeopt
