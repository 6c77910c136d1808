#include "shapeopt/optimizer.hpp"

#include "shapeopt/fem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

namespace shapeopt {

Objective Objective::eigenvalue(int k, CoefficientField coeff)
{
    if (k < 1)
        throw Error(Errc::InvalidArgument, "eigenvalue index must be at least 1");
    Objective o;
    o.kind = Kind::eigenvalue;
    o.k = k;
    o.coeff = std::move(coeff);
    return o;
}

Objective Objective::source_integral(Expr f, Expr j, CoefficientField coeff)
{
    Objective o;
    o.kind = Kind::source_integral;
    o.coeff = std::move(coeff);
    o.f = std::move(f);
    o.j = std::move(j);
    return o;
}

Objective Objective::boundary_integral(Expr f)
{
    Objective o;
    o.kind = Kind::boundary_integral;
    o.f = std::move(f);
    return o;
}

double Objective::evaluate(const ConvexPolygon& poly, double h) const
{
    switch (kind) {
    case Kind::eigenvalue:
        return eigenvalues(poly, coeff, k, h).eigenvalues.back();
    case Kind::source_integral:
        return integral_functional(solve_source(poly, coeff, *f, h), *j);
    case Kind::boundary_integral:
        return boundary_functional_2d(poly, *f);
    }
    return 0.0;
}

void ShapeProblem::validate() const
{
    if (!(m > 0.0) || m > box.area())
        throw Error(Errc::InvalidArgument, "volume must satisfy 0 < m <= area(D)");
    if (n_theta < 16)
        throw Error(Errc::InvalidArgument, "radial resolution must be at least 16");
    if (budget < 1)
        throw Error(Errc::InvalidArgument, "budget must be at least 1");
    if (!(h > 0.0))
        throw Error(Errc::InvalidArgument, "mesh size must be positive");
    if (objective.kind != Objective::Kind::eigenvalue && !objective.f)
        throw Error(Errc::InvalidArgument, "objective needs an integrand");
    if (objective.kind == Objective::Kind::source_integral && !objective.j)
        throw Error(Errc::InvalidArgument, "source objective needs a functional integrand");
}

OptimizationAborted::OptimizationAborted(std::string message, OptResult partial)
    : Error(Errc::ObjectiveFailure, message), partial_(std::move(partial))
{
}

namespace {

ConvexPolygon body_from_radii(Vec2 center, const std::vector<double>& radii, const Box& box, double m)
{
    return project_to_class(reconstruct(RadialFunction{center, radii}), box, m);
}

} // namespace

OptResult optimize(const ShapeProblem& problem, const CandidateObserver& observer)
{
    problem.validate();
    const Vec2 center = problem.box.center();
    std::vector<double> radii(static_cast<std::size_t>(problem.n_theta), std::sqrt(problem.m / std::numbers::pi));

    OptResult result{body_from_radii(center, radii, problem.box, problem.m), 0.0, {}, {}, 0, 0.0};
    result.stats.projected = 1;

    auto evaluate = [&](const ConvexPolygon& body) {
        ++result.evaluations;
        result.stats.max_area_error =
            std::max(result.stats.max_area_error, std::abs(body.area() - problem.m) / problem.m);
        try {
            const double value = problem.objective.evaluate(body, problem.h);
            if (observer)
                observer(body, value);
            return value;
        } catch (const Error& e) {
            throw OptimizationAborted(std::string("objective failed at evaluation ") +
                                          std::to_string(result.evaluations) + ": " + e.what(),
                                      result);
        }
    };

    result.best_value = evaluate(result.best);
    result.trace.push_back({result.evaluations, result.best_value});

    std::mt19937_64 rng(problem.seed);
    std::vector<int> order(radii.size());
    std::iota(order.begin(), order.end(), 0);

    double delta = 0.1;
    while (delta >= 1e-3 && result.evaluations < problem.budget) {
        std::shuffle(order.begin(), order.end(), rng);
        bool improved = false;
        for (int idx : order) {
            for (double sign : {1.0, -1.0}) {
                if (result.evaluations >= problem.budget)
                    break;
                std::vector<double> trial = radii;
                trial[idx] *= 1.0 + sign * delta;
                std::optional<ConvexPolygon> body;
                ++result.stats.projected;
                try {
                    body = body_from_radii(center, trial, problem.box, problem.m);
                } catch (const Error&) {
                    ++result.stats.rejected;
                    continue;
                }
                const double value = evaluate(*body);
                if (value < result.best_value) {
                    radii = std::move(trial);
                    result.best = std::move(*body);
                    result.best_value = value;
                    result.trace.push_back({result.evaluations, value});
                    improved = true;
                    break;
                }
            }
        }
        if (!improved)
            delta *= 0.5;
    }
    result.final_step = delta;
    return result;
}

namespace {

// Decreasing isotonic regression by pool-adjacent-violators, equal weights.
void pav_nonincreasing(std::vector<double>& s)
{
    struct Block {
        double sum;
        int count;
        double mean() const { return sum / count; }
    };
    std::vector<Block> blocks;
    for (double v : s) {
        blocks.push_back({v, 1});
        while (blocks.size() > 1 && blocks[blocks.size() - 2].mean() < blocks.back().mean()) {
            blocks[blocks.size() - 2].sum += blocks.back().sum;
            blocks[blocks.size() - 2].count += blocks.back().count;
            blocks.pop_back();
        }
    }
    std::size_t i = 0;
    for (const Block& b : blocks)
        for (int c = 0; c < b.count; ++c)
            s[i++] = b.mean();
}

// Heights from slopes, shifted to the given mean.
void integrate(RadialProfile& p, const std::vector<double>& slopes, double mean_target)
{
    const double dr = p.step();
    p.heights[0] = 0.0;
    for (std::size_t i = 0; i < slopes.size(); ++i)
        p.heights[i + 1] = p.heights[i] + slopes[i] * dr;
    const double mean = std::accumulate(p.heights.begin(), p.heights.end(), 0.0) / p.heights.size();
    for (double& u : p.heights)
        u += mean_target - mean;
}

void fit_bounds(RadialProfile& p)
{
    auto& u = p.heights;
    const double m = p.max_height;
    if (u.back() < 0.0) {
        const double lift = -u.back();
        for (double& v : u)
            v += lift;
    }
    if (u.front() > m) {
        const double base = std::min(u.back(), m);
        const double scale = u.front() > base ? (m - base) / (u.front() - base) : 0.0;
        for (double& v : u)
            v = base + scale * (v - base);
    }
    for (double& v : u)
        v = std::clamp(v, 0.0, m);
}

} // namespace

void project_profile(RadialProfile& p)
{
    if (p.heights.size() < 2)
        throw Error(Errc::InvalidProfile, "profile needs at least one cell");
    std::vector<double> slopes(static_cast<std::size_t>(p.cells()));
    for (int sweep = 0; sweep < 50; ++sweep) {
        const std::vector<double> before = p.heights;
        const double mean = std::accumulate(p.heights.begin(), p.heights.end(), 0.0) / p.heights.size();
        for (int i = 0; i < p.cells(); ++i)
            slopes[i] = p.slope(i);
        pav_nonincreasing(slopes);
        for (double& s : slopes)
            s = std::min(s, 0.0);
        integrate(p, slopes, mean);
        fit_bounds(p);
        double change = 0.0;
        for (std::size_t i = 0; i < before.size(); ++i)
            change = std::max(change, std::abs(before[i] - p.heights[i]));
        if (change <= 1e-12 * std::max(p.max_height, 1.0))
            break;
    }
}

RadialProfile newton_optimize_profile(double max_height, double radius, int n_r, int budget, std::uint64_t seed)
{
    if (!(max_height > 0.0) || !(radius > 0.0) || n_r < 50 || budget < 1)
        throw Error(Errc::InvalidArgument, "Newton profile needs M > 0, R > 0, n_r >= 50 and budget >= 1");

    // Start from the best truncated cone with its kink on a grid node.
    int evaluations = 0;
    RadialProfile best;
    double best_value = std::numeric_limits<double>::infinity();
    for (int j = n_r; j >= 0 && evaluations < budget; --j) {
        RadialProfile p = RadialProfile::truncated_cone(radius, max_height, radius * j / n_r, n_r);
        const double value = resistance_profile(p);
        ++evaluations;
        if (value < best_value) {
            best = std::move(p);
            best_value = value;
        }
    }

    std::mt19937_64 rng(seed);
    std::vector<int> order(static_cast<std::size_t>(n_r) + 1);
    std::iota(order.begin(), order.end(), 0);
    double delta = 0.05 * max_height;
    while (delta >= 1e-9 * max_height && evaluations < budget) {
        std::shuffle(order.begin(), order.end(), rng);
        bool improved = false;
        for (int idx : order) {
            for (double sign : {1.0, -1.0}) {
                if (evaluations >= budget)
                    break;
                RadialProfile trial = best;
                trial.heights[idx] += sign * delta;
                project_profile(trial);
                const double value = resistance_profile(trial);
                ++evaluations;
                if (value < best_value) {
                    best = std::move(trial);
                    best_value = value;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved)
            delta *= 0.5;
    }
    best.validate();
    return best;
}

Selection blaschke_select(std::span<const ConvexPolygon> bodies, std::span<const double> ladder)
{
    if (bodies.empty())
        throw Error(Errc::EmptySelection, "no bodies to select from");
    if (ladder.empty())
        throw Error(Errc::InvalidArgument, "ladder must not be empty");
    for (std::size_t i = 0; i < ladder.size(); ++i)
        if (!(ladder[i] > 0.0) || (i > 0 && !(ladder[i] < ladder[i - 1])))
            throw Error(Errc::InvalidArgument, "ladder must be positive and strictly decreasing");

    const std::size_t n = bodies.size();
    std::vector<double> dist(n * n, -1.0);
    auto d = [&](int a, int b) {
        double& slot = dist[static_cast<std::size_t>(std::min(a, b)) * n + std::max(a, b)];
        if (slot < 0.0)
            slot = a == b ? 0.0 : hausdorff_distance(bodies[a], bodies[b]);
        return slot;
    };

    std::vector<std::vector<int>> levels;
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    for (double eps : ladder) {
        std::vector<int> best;
        for (int c : pool) {
            std::vector<int> members;
            for (int x : pool)
                if (d(c, x) <= 0.5 * eps)
                    members.push_back(x);
            if (members.size() > best.size())
                best = std::move(members);
        }
        if (best.empty())
            throw Error(Errc::EmptySelection, "ladder level emptied the selection");
        pool = best;
        levels.push_back(pool);
    }

    constexpr int kLimitResolution = 512;
    Vec2 center{};
    for (int i : pool)
        center = center + inradius_center(bodies[i]).center;
    center = (1.0 / pool.size()) * center;
    for (int i : pool)
        if (boundary_clearance(bodies[i], center) <= 0.0)
            center = inradius_center(bodies[pool.front()]).center;
    RadialFunction avg{center, std::vector<double>(kLimitResolution, 0.0)};
    for (int i : pool) {
        const auto r = radial_parametrization(bodies[i], kLimitResolution, center);
        for (int t = 0; t < kLimitResolution; ++t)
            avg.samples[t] += r.samples[t] / pool.size();
    }
    return {std::move(levels), reconstruct(avg)};
}

} // namespace shapeopt
