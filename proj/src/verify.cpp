#include "shapeopt/verify.hpp"

#include "shapeopt/error.hpp"
#include "shapeopt/expr.hpp"
#include "shapeopt/fem.hpp"
#include "shapeopt/functionals.hpp"
#include "shapeopt/geometry.hpp"
#include "shapeopt/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace shapeopt::verify {

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Counts failed expectations and keeps the first failure message.
class Tally {
public:
    void expect(bool ok, const std::string& what)
    {
        ++checked_;
        if (!ok && failed_++ == 0)
            first_ = what;
    }
    int failed() const { return failed_; }

    Outcome outcome(const std::string& note) const
    {
        std::ostringstream s;
        s << (checked_ - failed_) << "/" << checked_ << " ok";
        if (!note.empty())
            s << "; " << note;
        if (failed_ > 0)
            s << "; first failure: " << first_;
        return {failed_ == 0, s.str()};
    }

private:
    int checked_ = 0;
    int failed_ = 0;
    std::string first_;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, format, a, b, c);
    return buf;
}

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

ConvexPolygon random_hull(Rng& rng, int count, double radius = 1.0, Vec2 center = {})
{
    for (;;) {
        std::vector<Vec2> pts;
        for (int i = 0; i < count; ++i)
            pts.push_back(center + radius * Vec2{uniform(rng, -1, 1), uniform(rng, -1, 1)});
        try {
            return convex_hull(pts);
        } catch (const Error&) {
        }
    }
}

// Jittered regular polygon; corners stay blunt enough to mesh.
ConvexPolygon round_polygon(Rng& rng, int n, double radius = 1.0, double jitter = 0.15, Vec2 center = {})
{
    const double phase = uniform(rng, 0.0, 2.0 * kPi);
    std::vector<Vec2> pts;
    for (int i = 0; i < n; ++i) {
        const double t = phase + 2.0 * kPi * i / n;
        const double r = radius * (1.0 + jitter * uniform(rng, -1, 1));
        pts.push_back(center + r * Vec2{std::cos(t), std::sin(t)});
    }
    return convex_hull(pts);
}

// A vertex-jitter sequence: each vertex moves along a fixed random vector of
// length <= 1, scaled by eps. The hull is within Hausdorff distance eps.
class JitterSequence {
public:
    JitterSequence(ConvexPolygon base, Rng& rng) : base_(std::move(base))
    {
        for (std::size_t i = 0; i < base_.size(); ++i) {
            const double a = uniform(rng, 0.0, 2.0 * kPi);
            dirs_.push_back(uniform(rng, 0.0, 1.0) * Vec2{std::cos(a), std::sin(a)});
        }
    }
    const ConvexPolygon& base() const { return base_; }
    ConvexPolygon at(double eps) const
    {
        std::vector<Vec2> pts;
        for (std::size_t i = 0; i < base_.size(); ++i)
            pts.push_back(base_.vertex(i) + eps * dirs_[i]);
        return convex_hull(pts);
    }

private:
    ConvexPolygon base_;
    std::vector<Vec2> dirs_;
};

Box bounding(const ConvexPolygon& p)
{
    const auto [lo, hi] = p.bounding_box();
    return Box(lo, hi);
}

double angle_between(Vec2 a, Vec2 b) { return std::acos(std::clamp(dot(a, b) / (norm(a) * norm(b)), -1.0, 1.0)); }

double segment_distance(Vec2 p, Vec2 a, Vec2 b)
{
    const Vec2 e = b - a;
    const double t = std::clamp(dot(p - a, e) / dot(e, e), 0.0, 1.0);
    return distance(p, a + t * e);
}

// ---------------------------------------------------------------- geometry

Outcome geometry_bonnesen(const Options& o)
{
    Rng rng(o.seed);
    Tally t;
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < o.instances; ++i) {
        const auto p = random_hull(rng, uniform_int(rng, 3, 24), uniform(rng, 0.1, 5.0));
        const auto b = bonnesen_check(p);
        worst = std::min(worst, b.slack / b.area);
        t.expect(b.slack > 0.0 && b.area < b.inradius * b.perimeter, fmt("slack %.3g on instance %g", b.slack, i));
    }
    return t.outcome(fmt("min relative slack %.4g", worst));
}

Outcome geometry_perimeter_monotonicity(const Options& o)
{
    Rng rng(o.seed);
    Tally t;
    int done = 0;
    while (done < o.instances) {
        const auto outer = random_hull(rng, uniform_int(rng, 4, 16));
        const Box bb = bounding(outer);
        const double x0 = uniform(rng, bb.lower().x, bb.center().x), y0 = uniform(rng, bb.lower().y, bb.center().y);
        const double x1 = uniform(rng, bb.center().x, bb.upper().x), y1 = uniform(rng, bb.center().y, bb.upper().y);
        ConvexPolygon inner = outer;
        try {
            inner = clip_to_box(outer, Box(Vec2{x0, y0}, Vec2{x1, y1}));
        } catch (const Error&) {
            continue;
        }
        ++done;
        t.expect(contains(outer, inner), "clipped body not contained");
        t.expect(inner.perimeter() <= outer.perimeter() * (1.0 + 1e-12),
                 fmt("inner perimeter %.12g > outer %.12g", inner.perimeter(), outer.perimeter()));
    }
    return t.outcome("");
}

Outcome geometry_measure_convergence(const Options& o)
{
    Rng rng(o.seed);
    Tally t;
    double worst_c = 0.0;
    for (int i = 0; i < o.instances; ++i) {
        const JitterSequence seq(round_polygon(rng, uniform_int(rng, 5, 14), 2.0, 0.2), rng);
        const auto& base = seq.base();
        for (int n = 1; n <= 64; ++n) {
            const double eps = 1.0 / n;
            const auto p = seq.at(eps);
            const double area_gap = std::abs(p.area() - base.area());
            const double per_gap = std::abs(p.perimeter() - base.perimeter());
            // Steiner bounds from Hausdorff distance <= eps between convex bodies.
            const double area_bound = eps * std::max(p.perimeter(), base.perimeter()) + kPi * eps * eps;
            t.expect(area_gap <= area_bound * (1 + 1e-12) && per_gap <= 2 * kPi * eps * (1 + 1e-12),
                     fmt("n=%g area gap %.4g perimeter gap %.4g", n, area_gap, per_gap));
            worst_c = std::max(worst_c, n * std::max(area_gap, per_gap));
        }
    }
    return t.outcome(fmt("max n*gap %.4g", worst_c));
}

Outcome geometry_hausdorff_metric(const Options& o)
{
    Rng rng(o.seed);
    Tally t;
    for (int i = 0; i < o.instances; ++i) {
        const auto a = random_hull(rng, uniform_int(rng, 3, 12));
        const auto b = random_hull(rng, uniform_int(rng, 3, 12), 1.0, {0.5, 0.0});
        const auto c = random_hull(rng, uniform_int(rng, 3, 12), 1.5);
        const double ab = hausdorff_distance(a, b), ba = hausdorff_distance(b, a);
        const double bc = hausdorff_distance(b, c), ac = hausdorff_distance(a, c);
        t.expect(ab == ba, "asymmetric distance");
        t.expect(ac <= (ab + bc) * (1.0 + 1e-12), fmt("triangle inequality %.12g > %.12g", ac, ab + bc));
        t.expect(hausdorff_distance(a, a) <= kGeomEps * a.diameter(), "d(a, a) > eps");
        const double shift = uniform(rng, 1e-3, 1.0);
        const double d = hausdorff_distance(a, translate(a, {shift, 0.0}));
        t.expect(d > 0.0 && std::abs(d - shift) <= 1e-12 * (1.0 + shift), fmt("translate by %.6g gives %.12g", shift, d));
    }
    return t.outcome("");
}

Outcome geometry_dilation_inclusion(const Options& o)
{
    Rng rng(o.seed);
    Tally t;
    for (int i = 0; i < o.instances; ++i) {
        const auto p = random_hull(rng, uniform_int(rng, 3, 14), uniform(rng, 0.2, 3.0));
        const auto ball = inradius_center(p);
        for (double frac : {0.125, 0.25, 0.5, 1.0}) {
            const double eps = frac * ball.radius;
            const auto d = minkowski_dilate(p, eps, 32);
            t.expect(contains(d, p), "body not inside its dilation");
            t.expect(contains(scale_about(p, ball.center, 1.0 + eps / ball.radius), d),
                     fmt("dilation by %.4g escapes the scaled copy", eps));
        }
    }
    return t.outcome("");
}

Outcome geometry_normal_convergence(const Options& o)
{
    Rng rng(o.seed);
    Tally t;
    double worst_final = 0.0;
    for (int i = 0; i < o.instances; ++i) {
        const JitterSequence seq(round_polygon(rng, uniform_int(rng, 6, 12)), rng);
        const auto& base = seq.base();
        const auto base_normals = edge_normals(base);
        for (std::size_t e = 0; e < base.size(); ++e) {
            const Vec2 x = 0.5 * (base.vertex(e) + base.vertex(e + 1));
            const double len = base_normals[e].length;
            double angle = 0.0;
            for (int n = 0; n <= 12; ++n) {
                const double eps = 0.02 * std::ldexp(1.0, -n);
                const auto p = seq.at(eps);
                const auto normals = edge_normals(p);
                std::size_t nearest = 0;
                double best = std::numeric_limits<double>::infinity();
                for (std::size_t k = 0; k < p.size(); ++k) {
                    const double d = segment_distance(x, p.vertex(k), p.vertex(k + 1));
                    if (d < best) {
                        best = d;
                        nearest = k;
                    }
                }
                angle = angle_between(normals[nearest].normal, base_normals[e].normal);
                // Both endpoints of the edge move by at most eps.
                const double bound = std::asin(std::min(1.0, 2.0 * eps / (len - 2.0 * eps)));
                t.expect(angle <= bound + 1e-9, fmt("angle %.4g above bound %.4g at eps %.3g", angle, bound, eps));
            }
            worst_final = std::max(worst_final, angle);
            t.expect(angle <= 1e-4, fmt("final angle %.4g", angle));
        }
    }
    return t.outcome(fmt("max final angle %.3g rad", worst_final));
}

Outcome geometry_radial_reconstruction(const Options& o)
{
    Rng rng(o.seed);
    Tally t;
    for (int i = 0; i < o.instances; ++i) {
        const auto p = random_hull(rng, uniform_int(rng, 3, 20));
        double prev = std::numeric_limits<double>::infinity();
        for (int n = 16; n <= 512; n *= 2) {
            const double d = hausdorff_distance(p, reconstruct(radial_parametrization(p, n)));
            t.expect(d <= prev * (1.0 + 1e-12) + 1e-15, fmt("n=%g distance %.6g after %.6g", n, d, prev));
            prev = d;
        }
    }
    return t.outcome("");
}

// ---------------------------------------------------------------- expressions

struct Template {
    std::string text;
    std::function<double(const Bindings&)> value;
};

Template random_template(Rng& rng, int depth)
{
    const int kind = uniform_int(rng, 0, depth <= 0 ? 1 : 7);
    if (kind == 0) {
        const double v = std::round(uniform(rng, 0.1, 9.9) * 100.0) / 100.0;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return {buf, [v](const Bindings&) { return v; }};
    }
    if (kind == 1) {
        const Var vars[] = {Var::x1, Var::x2, Var::u, Var::ux, Var::uy};
        const Var v = vars[uniform_int(rng, 0, 4)];
        return {std::string(var_name(v)), [v](const Bindings& b) { return b.get(v); }};
    }
    if (kind <= 5) {
        const char op = "+-*/"[kind - 2];
        auto l = random_template(rng, depth - 1);
        auto r = random_template(rng, depth - 1);
        return {"(" + l.text + " " + op + " " + r.text + ")", [op, lv = l.value, rv = r.value](const Bindings& b) {
                    const double x = lv(b), y = rv(b);
                    return op == '+' ? x + y : op == '-' ? x - y : op == '*' ? x * y : x / y;
                }};
    }
    if (kind == 6) {
        auto a = random_template(rng, depth - 1);
        return {"-(" + a.text + ")", [av = a.value](const Bindings& b) { return -av(b); }};
    }
    const int f = uniform_int(rng, 0, 3);
    static const char* names[] = {"sin", "cos", "exp", "abs"};
    auto a = random_template(rng, depth - 1);
    return {std::string(names[f]) + "(" + a.text + ")", [f, av = a.value](const Bindings& b) {
                const double x = av(b);
                return f == 0 ? std::sin(x) : f == 1 ? std::cos(x) : f == 2 ? std::exp(x) : std::abs(x);
            }};
}

Outcome expr_print_fixed_point(const Options& o)
{
    Rng rng(o.seed);
    Tally t;
    for (int i = 0; i < 1000; ++i) {
        const auto tpl = random_template(rng, 5);
        const std::string once = parse_expr(tpl.text).to_string();
        t.expect(parse_expr(once).to_string() == once, "not a fixed point: " + once);
    }
    return t.outcome("");
}

Outcome expr_fuzz_reference(const Options& o)
{
    Rng rng(o.seed);
    Tally t;
    int compared = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto tpl = random_template(rng, 4);
        const Bindings b{{Var::x1, uniform(rng, -2, 2)}, {Var::x2, uniform(rng, -2, 2)}, {Var::u, uniform(rng, -2, 2)},
                         {Var::ux, uniform(rng, -2, 2)}, {Var::uy, uniform(rng, -2, 2)}};
        const double want = tpl.value(b);
        const Expr e = parse_expr(tpl.text);
        double got = 0.0;
        try {
            got = e.eval(b);
        } catch (const Error&) {
            t.expect(!std::isfinite(want) || std::abs(want) > 1e300, "spurious evaluation error for " + tpl.text);
            continue;
        }
        t.expect(std::isfinite(want) && got == want, "mismatch for " + tpl.text);
        ++compared;
    }
    t.expect(compared >= 900, "too few finite comparisons");
    return t.outcome(fmt("%g finite comparisons", compared));
}

// ---------------------------------------------------------------- spectral

const CoefficientField& laplacian()
{
    static const CoefficientField id = CoefficientField::identity();
    return id;
}

std::vector<double> spectrum(const ConvexPolygon& p, int k, double h, const CoefficientField& c = laplacian())
{
    return eigenvalues(p, c, k, h).eigenvalues;
}

Outcome spectral_monotonicity(const Options& o)
{
    Rng rng(o.seed);
    Tally t;
    double worst = 0.0;
    for (int i = 0; i < o.instances; ++i) {
        const auto outer = round_polygon(rng, uniform_int(rng, 7, 12));
        const auto ball = inradius_center(outer);
        const double a = uniform(rng, 0.0, 2.0 * kPi);
        const Vec2 c = ball.center + uniform(rng, 0.0, 0.4 * ball.radius) * Vec2{std::cos(a), std::sin(a)};
        const auto shrunk = scale_about(outer, c, uniform(rng, 0.6, 0.95));
        const auto inner = project_to_class(shrunk, bounding(outer), shrunk.area());
        t.expect(contains(outer, inner), "inner body escapes");
        const auto lo = spectrum(outer, 5, 0.07);
        const auto hi = spectrum(inner, 5, 0.07);
        for (int k = 0; k < 5; ++k) {
            worst = std::max(worst, (lo[k] - hi[k]) / lo[k]);
            t.expect(hi[k] >= lo[k] * 0.98, fmt("lambda_%g inner %.6g < outer %.6g", k + 1, hi[k], lo[k]));
        }
    }
    return t.outcome(fmt("max relative inversion %.3g", std::max(0.0, worst)));
}

// Dirichlet eigenvalues of a rectangle, first k.
std::vector<double> rectangle_eigenvalues(double a, double b, int k)
{
    std::vector<double> v;
    for (int i = 1; i <= 2 * k; ++i)
        for (int j = 1; j <= 2 * k; ++j)
            v.push_back(kPi * kPi * (i * i / (a * a) + j * j / (b * b)));
    std::sort(v.begin(), v.end());
    v.resize(static_cast<std::size_t>(k));
    return v;
}

Outcome spectral_boundedness(const Options& o)
{
    // Squared zeros of Bessel functions: j01, j11 (x2), j21 (x2).
    const double disk[] = {5.783185962946784, 14.681970642123893, 14.681970642123893, 26.374616427163247,
                           26.374616427163247};
    Rng rng(o.seed);
    Tally t;
    for (int i = 0; i < o.instances; ++i) {
        const auto p = round_polygon(rng, uniform_int(rng, 7, 12));
        const Box bb = bounding(p);
        const double rho = inradius_center(p).radius;
        const auto lam = spectrum(p, 5, 0.07);
        const auto box = rectangle_eigenvalues(bb.width(), bb.height(), 5);
        for (int k = 0; k < 5; ++k) {
            t.expect(box[k] <= lam[k] * 1.02, fmt("lambda_%g(D) %.6g > %.6g", k + 1, box[k], lam[k]));
            t.expect(lam[k] <= disk[k] / (rho * rho) * 1.02, fmt("lambda_%g %.6g above inscribed disk %.6g", k + 1, lam[k], disk[k] / (rho * rho)));
        }
    }
    return t.outcome("");
}

Outcome spectral_homogeneity(const Options& o)
{
    Rng rng(o.seed);
    Tally t;
    double worst = 0.0;
    for (int i = 0; i < o.instances; ++i) {
        const auto p = round_polygon(rng, uniform_int(rng, 6, 12), 0.6);
        const double h = 0.04;
        const double small = spectrum(p, 1, h)[0];
        const double big = spectrum(scale_about(p, p.centroid(), 2.0), 1, 2 * h)[0];
        const double err = std::abs(4.0 * big / small - 1.0);
        worst = std::max(worst, err);
        t.expect(err <= 0.005, fmt("4 lambda(2 Omega) / lambda(Omega) - 1 = %.4g", err));
    }
    return t.outcome(fmt("max deviation %.3g", worst));
}

Outcome spectral_continuity_bracket(const Options& o)
{
    Rng rng(o.seed);
    Tally t;
    for (int i = 0; i < o.instances; ++i) {
        const JitterSequence seq(round_polygon(rng, uniform_int(rng, 7, 12)), rng);
        const double rho = inradius_center(seq.base()).radius;
        const double tt = 1.0 / rho;
        const auto base = spectrum(seq.base(), 3, 0.06);
        for (int n = 3; n <= 6; ++n) {
            const double eps = std::ldexp(1.0, -n);
            const auto lam = spectrum(seq.at(eps), 3, 0.06);
            const double f = (1.0 + tt * eps) * (1.0 + tt * eps);
            for (int k = 0; k < 3; ++k)
                t.expect(lam[k] >= base[k] / f * 0.98 && lam[k] <= base[k] * f * 1.02,
                         fmt("lambda_%g = %.6g outside bracket around %.6g", k + 1, lam[k], base[k]));
        }
    }
    return t.outcome("");
}

Outcome spectral_variable_coefficients(const Options& o)
{
    const auto coeff = CoefficientField::from_strings("1+0.5*x1*x1", "0", "1+0.5*x1*x1");
    Rng rng(o.seed);
    Tally t;
    double worst_final = 0.0;
    for (int i = 0; i < o.instances; ++i) {
        const JitterSequence seq(round_polygon(rng, uniform_int(rng, 7, 12)), rng);
        const double base = spectrum(seq.base(), 1, 0.08, coeff)[0];
        double prev = std::numeric_limits<double>::infinity();
        for (int n = 3; n <= 8; ++n) {
            const double gap = std::abs(spectrum(seq.at(std::ldexp(1.0, -n)), 1, 0.08, coeff)[0] - base);
            // Remeshing noise is allowed on top of a nonincreasing gap.
            t.expect(gap <= prev + 0.005 * base, fmt("gap %.4g grew from %.4g at n=%g", gap, prev, n));
            prev = gap;
        }
        worst_final = std::max(worst_final, prev / base);
        t.expect(prev <= 0.01 * base, fmt("final gap %.4g", prev / base));
    }
    return t.outcome(fmt("max final relative gap %.3g", worst_final));
}

Outcome spectral_zero_order_shift(const Options& o)
{
    const auto shifted = CoefficientField::from_strings("1", "0", "1", "1");
    Rng rng(o.seed);
    Tally t;
    for (int i = 0; i < o.instances; ++i) {
        const auto mesh = triangulate(round_polygon(rng, uniform_int(rng, 6, 12)), 0.1);
        const auto plain = eigenvalues(mesh, laplacian(), 5).eigenvalues;
        const auto plus = eigenvalues(mesh, shifted, 5).eigenvalues;
        for (int k = 0; k < 5; ++k) {
            t.expect(plus[k] >= plain[k], "shifted eigenvalue decreased");
            t.expect(std::abs(plus[k] - plain[k] - 1.0) <= 1e-6 * plus[k],
                     fmt("lambda_%g shift %.12g", k + 1, plus[k] - plain[k]));
        }
    }
    return t.outcome("");
}

Outcome spectral_galerkin_residual(const Options& o)
{
    Rng rng(o.seed);
    Tally t;
    double worst = 0.0;
    const auto coeff = CoefficientField::from_strings("1+0.5*x1*x1", "0.2", "2+x2*x2", "1");
    const auto f = parse_expr("1+x1*x2");
    for (int i = 0; i < o.instances; ++i) {
        const auto sol = solve_source(round_polygon(rng, uniform_int(rng, 6, 12)), coeff, f, 0.1);
        worst = std::max(worst, sol.relative_residual);
        t.expect(sol.relative_residual <= 1e-10, fmt("residual %.3g", sol.relative_residual));
        t.expect(std::abs(sol.energy - sol.load_work) <= 1e-10 * std::abs(sol.load_work), "energy identity");
    }
    return t.outcome(fmt("max residual %.3g", worst));
}

Outcome spectral_refinement_order(const Options&)
{
    const auto square = ConvexPolygon::from_ccw({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    const double exact = 2.0 * kPi * kPi;
    double err[3];
    const double hs[3] = {0.08, 0.04, 0.02};
    for (int i = 0; i < 3; ++i)
        err[i] = std::abs(spectrum(square, 1, hs[i])[0] - exact) / exact;
    const double p1 = std::log2(err[0] / err[1]);
    const double p2 = std::log2(err[1] / err[2]);
    Tally t;
    t.expect(p1 >= 1.7 && p2 >= 1.7, fmt("orders %.3g, %.3g", p1, p2));
    return t.outcome(fmt("errors %.3g %.3g %.3g", err[0], err[1], err[2]) + fmt(", orders %.3g %.3g", p1, p2));
}

// ---------------------------------------------------------------- functionals

RadialProfile random_profile(Rng& rng, int n_r, double radius, double max_height)
{
    const double steep = uniform(rng, 0.0, 4.0);
    std::vector<double> slopes(static_cast<std::size_t>(n_r));
    for (double& s : slopes)
        s = -steep * uniform(rng, 0, 1) * uniform(rng, 0, 1);
    std::sort(slopes.begin(), slopes.end(), std::greater<>());
    RadialProfile p;
    p.radius = radius;
    p.max_height = max_height;
    p.heights.assign(static_cast<std::size_t>(n_r) + 1, max_height);
    for (int i = 0; i < n_r; ++i)
        p.heights[i + 1] = p.heights[i] + slopes[i] * radius / n_r;
    project_profile(p);
    return p;
}

const char* kPositiveCube = "(0.5*(abs(n2)+n2))*(0.5*(abs(n2)+n2))*(0.5*(abs(n2)+n2))";

Outcome newton_positivity(const Options& o)
{
    Rng rng(o.seed);
    Tally t;
    const auto cube = parse_expr(kPositiveCube);
    for (int i = 0; i < o.instances; ++i) {
        const auto p = random_profile(rng, uniform_int(rng, 50, 400), uniform(rng, 0.2, 3.0), uniform(rng, 0.01, 5.0));
        const double r = resistance_profile(p);
        const double b = resistance_boundary_axisym(p);
        const double flat = kPi * p.radius * p.radius;
        t.expect(r >= 0.0 && r <= flat * (1 + 1e-12), fmt("resistance %.6g outside [0, %.6g]", r, flat));
        t.expect(b >= 0.0, "negative boundary form");
        t.expect(std::abs(r - b) <= 1e-6 * r, fmt("forms disagree: %.12g vs %.12g", r, b));
        t.expect(boundary_functional_2d(random_hull(rng, 8), cube) >= 0.0, "negative boundary functional");
    }
    return t.outcome("");
}

Outcome newton_slope_law(const Options& o)
{
    const auto p = newton_optimize_profile(1.0, 1.0, 200, 20000, o.seed);
    int flat = 0;
    while (flat < p.cells() && p.heights[flat + 1] >= p.heights[0] - 1e-12)
        ++flat;
    double min_slope = std::numeric_limits<double>::infinity();
    for (int i = flat; i < p.cells(); ++i)
        min_slope = std::min(min_slope, std::abs(p.slope(i)));
    Tally t;
    const double value = resistance_profile(p);
    t.expect(flat > 0, "no flat top");
    t.expect(min_slope >= 0.95, fmt("slope %.4g outside the flat top", min_slope));
    t.expect(value < kPi / 2, fmt("resistance %.8g not below the cone", value));
    return t.outcome(fmt("resistance %.6g, flat top %.3g, min outer slope %.4g", value, flat * p.step(), min_slope));
}

Outcome newton_lower_semicontinuity(const Options& o)
{
    Rng rng(o.seed);
    Tally t;
    const auto f = parse_expr(kPositiveCube);
    for (int i = 0; i < o.instances; ++i) {
        const JitterSequence seq(round_polygon(rng, uniform_int(rng, 5, 14)), rng);
        const double limit = boundary_functional_2d(seq.base(), f);
        double tail = std::numeric_limits<double>::infinity();
        for (int n = 100; n <= 150; ++n)
            tail = std::min(tail, boundary_functional_2d(seq.at(0.2 * std::pow(0.9, n)), f));
        t.expect(tail >= limit - 1e-3, fmt("liminf %.6g below %.6g", tail, limit));
    }
    return t.outcome("");
}

// ---------------------------------------------------------------- optimizer

struct ObservedRun {
    OptResult result;
    std::vector<std::pair<ConvexPolygon, double>> seen;
};

ObservedRun observed_run(const ShapeProblem& pr)
{
    std::vector<std::pair<ConvexPolygon, double>> seen;
    auto r = optimize(pr, [&](const ConvexPolygon& b, double v) { seen.emplace_back(b, v); });
    return {std::move(r), std::move(seen)};
}

std::vector<ShapeProblem> optimizer_problems(const Options& o)
{
    ShapeProblem a;
    a.objective = Objective::boundary_integral(parse_expr("x1*x1 + 2*x2"));
    a.box = Box({0, 0}, {2, 2});
    a.m = 1.0;
    a.budget = 200;
    a.seed = o.seed;
    ShapeProblem b = a;
    b.box = Box({0, 0}, {1.2, 1.2});
    ShapeProblem c;
    c.objective = Objective::eigenvalue(1);
    c.box = Box({0, 0}, {2, 2});
    c.m = 1.0;
    c.h = 0.15;
    c.budget = 20;
    c.seed = o.seed;
    return {a, b, c};
}

Outcome optimizer_feasibility(const Options& o)
{
    Tally t;
    for (const auto& pr : optimizer_problems(o)) {
        const auto run = observed_run(pr);
        const auto box = box_polygon(pr.box);
        for (const auto& [body, value] : run.seen) {
            t.expect(std::abs(body.area() - pr.m) <= 1e-6 * pr.m, fmt("area %.12g vs m %.12g", body.area(), pr.m));
            t.expect(contains(box, body), "candidate outside D");
            // Re-validating the vertex loop checks convexity within eps_geom.
            bool convex = true;
            try {
                ConvexPolygon::from_ccw(std::vector<Vec2>(body.vertices().begin(), body.vertices().end()));
            } catch (const Error&) {
                convex = false;
            }
            t.expect(convex, "candidate not convex");
        }
    }
    return t.outcome("");
}

Outcome optimizer_inradius_floor(const Options& o)
{
    Tally t;
    for (const auto& pr : optimizer_problems(o)) {
        const auto run = observed_run(pr);
        const double floor = pr.m / pr.box.perimeter() * 0.99;
        for (const auto& [body, value] : run.seen) {
            const double rho = inradius_center(body).radius;
            t.expect(rho >= pr.m / body.perimeter() && rho > floor, fmt("inradius %.6g below floor %.6g", rho, floor));
        }
    }
    return t.outcome("");
}

Outcome optimizer_monotone_trace(const Options& o)
{
    Tally t;
    for (const auto& pr : optimizer_problems(o)) {
        const auto r = optimize(pr);
        for (std::size_t i = 1; i < r.trace.size(); ++i)
            t.expect(r.trace[i].value <= r.trace[i - 1].value, fmt("trace rose at step %g", i));
        t.expect(r.trace.back().value == r.best_value, "best value is not the last accepted value");
    }
    return t.outcome("");
}

Outcome optimizer_determinism(const Options& o)
{
    Tally t;
    for (const auto& pr : optimizer_problems(o)) {
        const auto a = optimize(pr);
        const auto b = optimize(pr);
        bool same = a.best_value == b.best_value && a.trace.size() == b.trace.size() && a.best.size() == b.best.size();
        for (std::size_t i = 0; same && i < a.best.size(); ++i)
            same = a.best.vertex(i).x == b.best.vertex(i).x && a.best.vertex(i).y == b.best.vertex(i).y;
        for (std::size_t i = 0; same && i < a.trace.size(); ++i)
            same = a.trace[i].value == b.trace[i].value && a.trace[i].iteration == b.trace[i].iteration;
        t.expect(same, "repeated runs differ");
    }
    return t.outcome("");
}

Outcome optimizer_blaschke_nesting(const Options& o)
{
    Rng rng(o.seed);
    const Box box({0, 0}, {2, 2});
    std::vector<ConvexPolygon> bodies;
    while (static_cast<int>(bodies.size()) < 2 * o.instances)
        bodies.push_back(project_to_class(random_hull(rng, 8, 0.6, {1, 1}), box, 1.0));
    const std::vector<double> ladder{0.5, 0.25, 0.125, 0.0625};
    const auto sel = blaschke_select(bodies, ladder);
    Tally t;
    std::string sizes;
    for (std::size_t j = 0; j < sel.levels.size(); ++j) {
        const auto& lvl = sel.levels[j];
        sizes += (j ? " " : "") + std::to_string(lvl.size());
        t.expect(!lvl.empty(), "empty level");
        if (j > 0)
            for (int idx : lvl)
                t.expect(std::find(sel.levels[j - 1].begin(), sel.levels[j - 1].end(), idx) != sel.levels[j - 1].end(),
                         "level not nested");
        for (int a : lvl)
            for (int b : lvl)
                t.expect(hausdorff_distance(bodies[a], bodies[b]) <= ladder[j], fmt("pair beyond %.4g", ladder[j]));
    }
    return t.outcome("level sizes " + sizes);
}

// ---------------------------------------------------------------- registry

struct Check {
    const char* id;
    const char* summary;
    Outcome (*run)(const Options&);
};

const Check kChecks[] = {
    {"expr.fuzz_reference", "evaluation matches a direct evaluator on 1000 random expressions", expr_fuzz_reference},
    {"expr.print_fixed_point", "print(parse(print(e))) == print(e)", expr_print_fixed_point},
    {"geometry.bonnesen", "area < inradius * perimeter", geometry_bonnesen},
    {"geometry.dilation_inclusion", "P within P + B(eps) within (1 + eps/rho) P", geometry_dilation_inclusion},
    {"geometry.hausdorff_metric", "Hausdorff distance is a metric", geometry_hausdorff_metric},
    {"geometry.measure_convergence", "area and perimeter converge along jitter sequences", geometry_measure_convergence},
    {"geometry.normal_convergence", "outer normals converge along jitter sequences", geometry_normal_convergence},
    {"geometry.perimeter_monotonicity", "perimeter is monotone under inclusion", geometry_perimeter_monotonicity},
    {"geometry.radial_reconstruction", "reconstruction error is nonincreasing on a dyadic ladder", geometry_radial_reconstruction},
    {"newton.lower_semicontinuity", "boundary functional is lower semicontinuous along jitter sequences", newton_lower_semicontinuity},
    {"newton.positivity", "resistance lies in [0, pi R^2]; both forms agree", newton_positivity},
    {"newton.slope_law", "optimized profile has a flat top and |s| >= 0.95 outside it", newton_slope_law},
    {"optimizer.blaschke_nesting", "selection levels are nested and pairwise within eps", optimizer_blaschke_nesting},
    {"optimizer.determinism", "identical problems give identical results", optimizer_determinism},
    {"optimizer.feasibility", "every candidate is convex, inside D, with area m", optimizer_feasibility},
    {"optimizer.inradius_floor", "candidate inradius >= m / perimeter", optimizer_inradius_floor},
    {"optimizer.monotone_trace", "accepted values are nonincreasing", optimizer_monotone_trace},
    {"spectral.boundedness", "lambda_k(D) <= lambda_k(Omega) <= lambda_k(inscribed ball)", spectral_boundedness},
    {"spectral.continuity_bracket", "(1+t eps)^-2 lambda <= lambda_n <= (1+t eps)^2 lambda", spectral_continuity_bracket},
    {"spectral.galerkin_residual", "discrete residual <= 1e-10 and energy identity", spectral_galerkin_residual},
    {"spectral.homogeneity", "4 lambda_1(2 Omega) = lambda_1(Omega)", spectral_homogeneity},
    {"spectral.monotonicity", "lambda_k decreases under inclusion", spectral_monotonicity},
    {"spectral.refinement_order", "lambda_1 error order >= 1.7 under mesh halving", spectral_refinement_order},
    {"spectral.variable_coefficients", "lambda_1 with variable a_ij converges along jitter sequences", spectral_variable_coefficients},
    {"spectral.zero_order_shift", "c0 = 1 shifts the Laplacian spectrum by 1", spectral_zero_order_shift},
};

bool in_suite(std::string_view id, std::string_view suite)
{
    if (suite == "all")
        return true;
    return id.substr(0, id.find('.')) == suite;
}

void check_suite_name(std::string_view suite)
{
    if (suite != "all" && suite != "geometry" && suite != "spectral" && suite != "newton")
        throw Error(Errc::InvalidArgument, "unknown suite '" + std::string(suite) + "' (all, geometry, spectral, newton)");
}

CheckResult execute(const Check& c, const Options& o)
{
    const auto start = std::chrono::steady_clock::now();
    CheckResult r{c.id, false, "", 0.0};
    try {
        const Outcome out = c.run(o);
        r.pass = out.pass;
        r.detail = out.detail;
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

} // namespace

std::vector<CheckInfo> list_checks(std::string_view suite)
{
    check_suite_name(suite);
    std::vector<CheckInfo> out;
    for (const Check& c : kChecks)
        if (in_suite(c.id, suite))
            out.push_back({c.id, c.summary});
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return out;
}

std::vector<CheckResult> run_suite(std::string_view suite, const Options& options)
{
    std::vector<CheckResult> out;
    for (const CheckInfo& info : list_checks(suite))
        out.push_back(run_check(info.id, options));
    return out;
}

CheckResult run_check(std::string_view id, const Options& options)
{
    if (options.instances < 1)
        throw Error(Errc::InvalidArgument, "instances must be at least 1");
    for (const Check& c : kChecks)
        if (id == c.id)
            return execute(c, options);
    throw Error(Errc::InvalidArgument, "unknown check '" + std::string(id) + "'");
}

} // namespace shapeopt::verify
