// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "../test_support.hpp"

#include "shapeopt/fem.hpp"
#include "shapeopt/functionals.hpp"
#include "shapeopt/geometry.hpp"
#include "shapeopt/io.hpp"
#include "shapeopt/optimizer.hpp"
#include "shapeopt/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

using namespace shapeopt;
using namespace shapeopt::testing;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kJ01Squared = 5.783185962946784;

struct Check {
    bool pass = true;
    std::string detail;

    void expect(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string& what) { info += (info.empty() ? "" : ", ") + what; }
    std::string info;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double rel(double value, double exact) { return std::abs(value - exact) / std::abs(exact); }

// ---------------------------------------------------------------- 1

void geometry_oracles(Check& c)
{
    const auto sq = unit_square();
    const auto tri = ConvexPolygon::from_ccw({{0, 0}, {1, 0}, {0, 1}});
    c.expect(std::abs(sq.area() - 1.0) <= 1e-12, "square area");
    c.expect(std::abs(sq.perimeter() - 4.0) <= 1e-12, "square perimeter");
    c.expect(std::abs(inradius_center(sq).radius - 0.5) <= 1e-12, "square inradius");
    c.expect(std::abs(tri.area() - 0.5) <= 1e-12, "triangle area");
    c.expect(std::abs(tri.perimeter() - (2.0 + std::sqrt(2.0))) <= 1e-12, "triangle perimeter");
    const double tri_rho = inradius_center(tri).radius;
    c.expect(std::abs(tri_rho - (1.0 - 1.0 / std::sqrt(2.0))) <= 1e-12, fmt("triangle inradius %.15g", tri_rho));

    const double d = hausdorff_distance(tri, translate(tri, {0.3, 0.4}));
    c.expect(std::abs(d - 0.5) <= 1e-12, fmt("translation distance %.15g", d));

    const double eps = 0.1;
    const double steiner = minkowski_dilate(sq, eps, 64).area();
    const double exact = 1.0 + 4.0 * eps + kPi * eps * eps;
    c.expect(std::abs(steiner - exact) <= 1e-4, fmt("dilation area %.8g vs %.8g", steiner, exact));
    c.note(fmt("dilation error %.2g", std::abs(steiner - exact)));
}

// ---------------------------------------------------------------- 2

void bonnesen_property(Check& c)
{
    std::mt19937_64 rng(1);
    double min_ratio = 1e300;
    for (int i = 0; i < 100; ++i) {
        std::uniform_int_distribution<int> count(3, 40);
        const auto p = random_hull(rng, count(rng), 1.0);
        const auto b = bonnesen_check(p);
        c.expect(b.area < b.inradius * b.perimeter && b.slack > 0.0, "slack not positive on instance " + std::to_string(i));
        min_ratio = std::min(min_ratio, b.slack / b.area);
    }
    c.note(fmt("100 polygons, min slack/area %.3g", min_ratio));
}

// ---------------------------------------------------------------- 3

void spectral_oracles(Check& c)
{
    const auto id = CoefficientField::identity();
    const auto sq = eigenvalues(unit_square(), id, 3, 0.02).eigenvalues;
    const double exact[3] = {2 * kPi * kPi, 5 * kPi * kPi, 5 * kPi * kPi};
    for (int k = 0; k < 3; ++k)
        c.expect(rel(sq[k], exact[k]) <= 0.01, fmt("square lambda_%g = %.6g vs %.6g", k + 1, sq[k], exact[k]));
    c.note(fmt("square %.5g %.5g %.5g", sq[0], sq[1], sq[2]));

    const double disk = eigenvalues(regular_polygon(256, 1.0), id, 1, 0.02).eigenvalues[0];
    c.expect(rel(disk, kJ01Squared) <= 0.01, fmt("disk lambda_1 = %.6g", disk));
    c.note(fmt("disk %.6g", disk));

    double err[3];
    const double hs[3] = {0.08, 0.04, 0.02};
    for (int i = 0; i < 3; ++i)
        err[i] = rel(eigenvalues(unit_square(), id, 1, hs[i]).eigenvalues[0], exact[0]);
    const double p1 = std::log2(err[0] / err[1]);
    const double p2 = std::log2(err[1] / err[2]);
    c.expect(p1 >= 1.7 && p2 >= 1.7, fmt("orders %.3g %.3g", p1, p2));
    c.note(fmt("orders %.3g %.3g", p1, p2));
}

// ---------------------------------------------------------------- 4

void lemma_suite(Check& c)
{
    const verify::Options opts{1, 50};
    for (const char* id : {"spectral.monotonicity", "spectral.homogeneity", "spectral.continuity_bracket",
                           "geometry.measure_convergence", "geometry.normal_convergence"}) {
        const auto r = verify::run_check(id, opts);
        c.expect(r.pass, std::string(id) + ": " + r.detail);
        c.note(std::string(id) + (r.pass ? " ok" : " FAIL"));
    }
}

// ---------------------------------------------------------------- 5

void source_oracles(Check& c)
{
    const auto disk = regular_polygon(256, 1.0);
    const auto sol = solve_source(disk, CoefficientField::identity(), parse_expr("1"), 0.03);
    double umax = 0.0;
    for (double v : sol.u)
        umax = std::max(umax, v);
    const double integral = integral_functional(sol, parse_expr("u"));
    const double dirichlet = integral_functional(sol, parse_expr("ux*ux + uy*uy"));
    c.expect(rel(umax, 0.25) <= 0.01, fmt("max u = %.6g", umax));
    c.expect(rel(integral, kPi / 8) <= 0.01, fmt("integral u = %.6g", integral));
    c.expect(rel(dirichlet, integral) <= 0.015, fmt("energy %.6g vs %.6g", dirichlet, integral));
    c.note(fmt("max u %.5g, int u %.5g, int |Du|^2 %.5g", umax, integral, dirichlet));
}

// ---------------------------------------------------------------- 6

void newton_suite(Check& c)
{
    const double flat = resistance_profile(RadialProfile::flat(1.0, 1.0, 200));
    c.expect(std::abs(flat - kPi) <= 1e-12, fmt("flat %.15g", flat));
    const double cone = resistance_profile(RadialProfile::cone(1.0, 1.0, 1000));
    c.expect(std::abs(cone - kPi / 2) <= 1e-6, fmt("cone %.12g", cone));

    RadialProfile hemi;
    const int n = 2000;
    hemi.heights.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double r = static_cast<double>(i) / n;
        hemi.heights[i] = std::sqrt(std::max(0.0, 1.0 - r * r));
    }
    const double hb = resistance_boundary_axisym(hemi);
    c.expect(std::abs(hb - kPi / 2) <= 1e-3, fmt("hemisphere %.8g", hb));

    std::mt19937_64 rng(6);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const auto p = random_profile(rng);
        worst = std::max(worst, rel(resistance_boundary_axisym(p), resistance_profile(p)));
    }
    c.expect(worst <= 1e-6, fmt("profile/boundary gap %.3g", worst));

    const auto best = newton_optimize_profile(1.0, 1.0, 200, 20000, 1);
    const double value = resistance_profile(best);
    c.expect(value < kPi / 2, fmt("optimized %.8g not below pi/2", value));
    int top = 0;
    while (top < best.cells() && std::abs(best.slope(top)) < 1e-9)
        ++top;
    c.expect(top > 0, "no flat top");
    double min_slope = 1e300;
    for (int i = top; i < best.cells(); ++i)
        min_slope = std::min(min_slope, std::abs(best.slope(i)));
    c.expect(min_slope >= 0.95, fmt("outer slope %.4g", min_slope));
    c.note(fmt("optimized %.6g, flat top %.3g, min outer slope %.4g", value, top * best.step(), min_slope));
}

// ---------------------------------------------------------------- 7

void optimizer_regression(Check& c)
{
    const Box box({0, 0}, {4, 4});
    ShapeProblem lam;
    lam.objective = Objective::eigenvalue(1);
    lam.box = box;
    lam.m = kPi;
    lam.budget = 500;
    lam.seed = 1;
    const auto r1 = optimize(lam);
    const auto disk = regular_polygon_with_area(512, kPi, box.center());
    const double dh = hausdorff_distance(r1.best, disk);
    c.expect(rel(r1.best_value, kJ01Squared) <= 0.03, fmt("lambda_1 %.6g", r1.best_value));
    c.expect(dh <= 0.1, fmt("Hausdorff to disk %.4g", dh));

    const auto r2 = optimize(lam);
    c.expect(io::to_json(r1).dump() == io::to_json(r2).dump(), "repeat run differs");

    ShapeProblem per = lam;
    per.objective = Objective::boundary_integral(parse_expr("1"));
    const auto rp = optimize(per);
    const double target = 2.0 * std::sqrt(kPi * per.m);
    c.expect(rel(rp.best_value, target) <= 0.02, fmt("perimeter %.6g vs %.6g", rp.best_value, target));

    c.note(fmt("lambda_1 %.6g, Hausdorff %.3g, perimeter %.6g", r1.best_value, dh, rp.best_value));
}

// ---------------------------------------------------------------- 8

void compactness_demo(Check& c)
{
    std::mt19937_64 rng(8);
    const Box box({0, 0}, {2, 2});
    std::vector<ConvexPolygon> bodies;
    while (bodies.size() < 100)
        bodies.push_back(project_to_class(random_hull(rng, 8, 0.6, {1, 1}), box, 1.0));
    const std::vector<double> ladder{0.5, 0.25, 0.125, 0.0625};
    const auto sel = blaschke_select(bodies, ladder);
    c.expect(sel.levels.size() == ladder.size(), "wrong number of levels");
    std::string sizes;
    for (std::size_t j = 0; j < sel.levels.size(); ++j) {
        const auto& lvl = sel.levels[j];
        c.expect(!lvl.empty(), "empty level");
        sizes += (j ? " " : "") + std::to_string(lvl.size());
        if (j > 0)
            for (int idx : lvl)
                c.expect(std::find(sel.levels[j - 1].begin(), sel.levels[j - 1].end(), idx) != sel.levels[j - 1].end(),
                         "levels not nested");
        for (int a : lvl)
            for (int b : lvl)
                c.expect(hausdorff_distance(bodies[a], bodies[b]) <= ladder[j], "pairwise bound violated");
    }
    c.note("level sizes " + sizes);
}

} // namespace

int main()
{
    struct Criterion {
        int id;
        const char* name;
        double limit_seconds;
        std::function<void(Check&)> run;
    };
    const std::vector<Criterion> criteria{
        {1, "geometry oracles", 1.0, geometry_oracles},
        {2, "Bonnesen property", 5.0, bonnesen_property},
        {3, "spectral oracles", 60.0, spectral_oracles},
        {4, "lemma suite", 300.0, lemma_suite},
        {5, "source problem oracles", 30.0, source_oracles},
        {6, "Newton suite", 120.0, newton_suite},
        {7, "optimizer regression", 600.0, optimizer_regression},
        {8, "compactness demo", 60.0, compactness_demo},
    };

    int failed = 0;
    for (const auto& cr : criteria) {
        Check c;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            cr.run(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        c.expect(secs < cr.limit_seconds, fmt("runtime %.1f s over %.0f s", secs, cr.limit_seconds));
        failed += c.pass ? 0 : 1;
        std::printf("%s criterion %d (%s): %s [%.2f s]\n", c.pass ? "PASS" : "FAIL", cr.id, cr.name,
                    c.pass ? c.info.c_str() : c.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
