// shapeopt command-line front end. JSON results go to stdout; the resolved
// configuration and log lines go to stderr.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or configuration
// error, 3 numerical failure.

#include "shapeopt/error.hpp"
#include "shapeopt/fem.hpp"
#include "shapeopt/functionals.hpp"
#include "shapeopt/geometry.hpp"
#include "shapeopt/io.hpp"
#include "shapeopt/optimizer.hpp"
#include "shapeopt/verify.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using shapeopt::Errc;
using shapeopt::Error;
using Json = shapeopt::io::Json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

std::string timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void log_line(const std::string& message) { std::cerr << "[shapeopt " << timestamp() << "] " << message << "\n"; }

void emit(const Json& payload) { std::cout << payload.dump(2) << "\n"; }

std::uint64_t default_seed()
{
    const char* env = std::getenv("SHAPEOPT_SEED");
    if (env == nullptr || *env == '\0')
        return 1;
    std::uint64_t value = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw Error(Errc::InvalidArgument, "SHAPEOPT_SEED must be a nonnegative integer");
    return value;
}

shapeopt::Box box_from_argument(const std::string& text)
{
    if (std::filesystem::is_regular_file(text))
        return shapeopt::io::parse_box(shapeopt::io::read_text(text));
    return shapeopt::io::parse_box(text);
}

shapeopt::ConvexPolygon polygon_file(const std::string& path)
{
    return shapeopt::io::parse_polygon(shapeopt::io::read_text(path));
}

// ---------------------------------------------------------------- settings

struct Coefficients {
    std::string a11 = "1", a12 = "0", a22 = "1";
    std::optional<std::string> c0;

    void add_to(CLI::App* app)
    {
        app->add_option("--a11", a11, "coefficient a11(x1, x2)")->capture_default_str();
        app->add_option("--a12", a12, "coefficient a12(x1, x2)")->capture_default_str();
        app->add_option("--a22", a22, "coefficient a22(x1, x2)")->capture_default_str();
        app->add_option("--c0", c0, "zero-order coefficient c0(x1, x2)");
    }
    shapeopt::CoefficientField field() const { return shapeopt::CoefficientField::from_strings(
            a11, a12, a22, c0 ? std::optional<std::string_view>(*c0) : std::nullopt);
    }
    void describe(Json& j) const
    {
        j["a11"] = a11;
        j["a12"] = a12;
        j["a22"] = a22;
        j["c0"] = c0 ? Json(*c0) : Json(nullptr);
    }
};

struct GeometrySettings {
    std::vector<std::string> files;
    double eps = 0.1;
    int segments = 64;
    std::string box;
    double m = 0.0;
    double tol = 1e-9;
};

struct EigenSettings {
    std::string polygon;
    int k = 1;
    double h = 0.05;
    Coefficients coeff;
};

struct SolveSettings {
    std::string polygon;
    std::string f = "1";
    std::string j = "u";
    double h = 0.05;
    std::string csv;
    Coefficients coeff;
};

struct NewtonSettings {
    double M = 1.0;
    double R = 1.0;
    int nr = 200;
    int budget = 20000;
    std::uint64_t seed = 1;
    std::string out = "newton_profile.txt";
};

struct OptimizeSettings {
    std::string objective = "lambda1";
    std::string box = "0 0 4 4";
    double m = 3.141592653589793;
    int budget = 500;
    std::uint64_t seed = 1;
    int k = 1;
    int ntheta = 32;
    double h = 0.08;
    std::string f;
    std::string j;
    std::string trace_csv;
    Coefficients coeff;
};

struct VerifySettings {
    std::string suite = "all";
    std::uint64_t seed = 1;
    int instances = 50;
};

void echo_config(const std::string& command, const Json& config)
{
    log_line("command=" + command + " config=" + config.dump());
}

// ---------------------------------------------------------------- commands

int cmd_geometry(const std::string& op, const GeometrySettings& s)
{
    Json cfg{{"op", op}, {"files", s.files}};
    const std::size_t want = op == "hausdorff" ? 2 : 1;
    if (s.files.size() != want)
        throw Error(Errc::InvalidArgument, "geometry " + op + " takes " + std::to_string(want) + " polygon file(s)");

    Json out;
    if (op == "project") {
        cfg["box"] = s.box;
        cfg["m"] = s.m;
        cfg["tol"] = s.tol;
        echo_config("geometry", cfg);
        const auto pts = shapeopt::io::parse_points(shapeopt::io::read_text(s.files[0]));
        const auto body = shapeopt::project_to_class(pts, box_from_argument(s.box), s.m, s.tol);
        out = {{"area", body.area()}, {"perimeter", body.perimeter()}, {"vertices", shapeopt::io::to_json(body)}};
        emit(out);
        return kExitOk;
    }
    if (op == "dilate") {
        cfg["eps"] = s.eps;
        cfg["segments"] = s.segments;
    }
    echo_config("geometry", cfg);
    const auto p = polygon_file(s.files[0]);
    if (op == "area") {
        out = {{"area", p.area()}};
    } else if (op == "perimeter") {
        out = {{"perimeter", p.perimeter()}};
    } else if (op == "inradius") {
        const auto ball = shapeopt::inradius_center(p);
        out = {{"inradius", ball.radius}, {"center", {ball.center.x, ball.center.y}}};
    } else if (op == "hausdorff") {
        out = {{"d", shapeopt::hausdorff_distance(p, polygon_file(s.files[1]))}};
    } else if (op == "bonnesen") {
        out = shapeopt::io::to_json(shapeopt::bonnesen_check(p));
    } else if (op == "dilate") {
        const auto d = shapeopt::minkowski_dilate(p, s.eps, s.segments);
        out = {{"area", d.area()}, {"perimeter", d.perimeter()}, {"vertices", shapeopt::io::to_json(d)}};
    }
    emit(out);
    return kExitOk;
}

int cmd_eigen(const EigenSettings& s)
{
    Json cfg{{"polygon", s.polygon}, {"k", s.k}, {"h", s.h}};
    s.coeff.describe(cfg);
    echo_config("eigen", cfg);
    const auto spectrum = shapeopt::eigenvalues(polygon_file(s.polygon), s.coeff.field(), s.k, s.h);
    log_line("dof=" + std::to_string(spectrum.dof) + " iterations=" + std::to_string(spectrum.iterations));
    emit(shapeopt::io::to_json(spectrum));
    return kExitOk;
}

int cmd_solve(const SolveSettings& s)
{
    Json cfg{{"polygon", s.polygon}, {"f", s.f}, {"j", s.j}, {"h", s.h}, {"csv", s.csv}};
    s.coeff.describe(cfg);
    echo_config("solve", cfg);
    const auto f = shapeopt::parse_expr(s.f, shapeopt::kSpatialVars);
    const auto j = shapeopt::parse_expr(s.j, shapeopt::kIntegrandVars);
    const auto sol = shapeopt::solve_source(polygon_file(s.polygon), s.coeff.field(), f, s.h);
    const double value = shapeopt::integral_functional(sol, j);
    if (!s.csv.empty())
        shapeopt::io::write_text(s.csv, shapeopt::io::solution_csv(sol));
    emit({{"value", value},
          {"csv", s.csv.empty() ? Json(nullptr) : Json(s.csv)},
          {"dof", sol.mesh.interior_count()},
          {"energy", sol.energy},
          {"relative_residual", sol.relative_residual}});
    return kExitOk;
}

int cmd_newton(const NewtonSettings& s)
{
    echo_config("newton", {{"M", s.M}, {"R", s.R}, {"nr", s.nr}, {"budget", s.budget}, {"seed", s.seed}, {"out", s.out}});
    const auto p = shapeopt::newton_optimize_profile(s.M, s.R, s.nr, s.budget, s.seed);
    if (!s.out.empty())
        shapeopt::io::write_text(s.out, shapeopt::io::format_profile(p));
    int flat = 0;
    while (flat < p.cells() && p.heights[flat + 1] >= p.heights[0] - 1e-12)
        ++flat;
    emit({{"resistance", shapeopt::resistance_profile(p)},
          {"boundary_resistance", shapeopt::resistance_boundary_axisym(p)},
          {"flat_top_radius", flat * p.step()},
          {"profile", s.out.empty() ? Json(nullptr) : Json(s.out)}});
    return kExitOk;
}

shapeopt::Objective make_objective(const OptimizeSettings& s)
{
    using shapeopt::Objective;
    if (s.objective == "lambda1")
        return Objective::eigenvalue(1, s.coeff.field());
    if (s.objective == "lambda")
        return Objective::eigenvalue(s.k, s.coeff.field());
    if (s.objective == "perimeter")
        return Objective::boundary_integral(shapeopt::parse_expr("1"));
    if (s.objective == "boundary") {
        if (s.f.empty())
            throw Error(Errc::InvalidArgument, "objective 'boundary' needs --f");
        return Objective::boundary_integral(shapeopt::parse_expr(s.f, shapeopt::kBoundaryVars));
    }
    if (s.objective == "source") {
        if (s.f.empty() || s.j.empty())
            throw Error(Errc::InvalidArgument, "objective 'source' needs --f and --j");
        return Objective::source_integral(shapeopt::parse_expr(s.f, shapeopt::kSpatialVars),
                                          shapeopt::parse_expr(s.j, shapeopt::kIntegrandVars), s.coeff.field());
    }
    throw Error(Errc::InvalidArgument, "unknown objective '" + s.objective + "'");
}

int cmd_optimize(const OptimizeSettings& s)
{
    Json cfg{{"objective", s.objective}, {"box", s.box}, {"m", s.m}, {"budget", s.budget}, {"seed", s.seed},
             {"k", s.k}, {"ntheta", s.ntheta}, {"h", s.h}, {"f", s.f}, {"j", s.j}, {"trace_csv", s.trace_csv}};
    s.coeff.describe(cfg);
    echo_config("optimize", cfg);

    shapeopt::ShapeProblem problem;
    problem.objective = make_objective(s);
    problem.box = box_from_argument(s.box);
    problem.m = s.m;
    problem.n_theta = s.ntheta;
    problem.h = s.h;
    problem.budget = s.budget;
    problem.seed = s.seed;

    auto finish = [&](const shapeopt::OptResult& r) {
        if (!s.trace_csv.empty())
            shapeopt::io::write_text(s.trace_csv, shapeopt::io::trace_csv(r));
        emit(shapeopt::io::to_json(r));
    };
    try {
        const auto r = shapeopt::optimize(problem);
        log_line("evaluations=" + std::to_string(r.evaluations) + " accepted=" + std::to_string(r.trace.size()));
        finish(r);
    } catch (const shapeopt::OptimizationAborted& e) {
        log_line(std::string("aborted: ") + e.what());
        finish(e.partial());
        return kExitNumeric;
    }
    return kExitOk;
}

int cmd_verify(const VerifySettings& s)
{
    echo_config("verify", {{"suite", s.suite}, {"seed", s.seed}, {"instances", s.instances}});
    const auto results = shapeopt::verify::run_suite(s.suite, {s.seed, s.instances});
    Json checks = Json::array();
    int failed = 0;
    for (const auto& r : results) {
        std::cerr << (r.pass ? "PASS " : "FAIL ") << r.id << "  " << r.detail << "\n";
        failed += r.pass ? 0 : 1;
        checks.push_back({{"id", r.id}, {"pass", r.pass}, {"detail", r.detail}});
    }
    emit({{"suite", s.suite},
          {"seed", s.seed},
          {"passed", static_cast<int>(results.size()) - failed},
          {"failed", failed},
          {"checks", checks}});
    return failed == 0 ? kExitOk : kExitVerifyFailed;
}

// ---------------------------------------------------------------- config file

std::string trim(std::string s)
{
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

// "key = value" lines turned into "--key value" arguments for `target`.
std::vector<std::string> config_arguments(const std::string& path, const CLI::App* target)
{
    std::vector<std::string> out;
    std::istringstream in(shapeopt::io::read_text(path));
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
        if (trim(line).empty())
            continue;
        const auto eq = line.find('=');
        const std::string key = eq == std::string::npos ? std::string() : trim(line.substr(0, eq));
        if (key.empty())
            throw Error(Errc::InvalidArgument, path + ":" + std::to_string(line_no) + ": expected 'key = value'");
        if (target->get_option_no_throw("--" + key) == nullptr || key == "help")
            throw Error(Errc::InvalidArgument,
                        path + ":" + std::to_string(line_no) + ": unknown key '" + key + "' for " + target->get_name());
        out.push_back("--" + key);
        out.push_back(trim(line.substr(eq + 1)));
    }
    return out;
}

// Removes "--config PATH" / "--config=PATH" from the arguments.
std::optional<std::string> take_config(std::vector<std::string>& args)
{
    std::optional<std::string> path;
    for (std::size_t i = 0; i < args.size();) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size())
                throw Error(Errc::InvalidArgument, "--config needs a file");
            path = args[i + 1];
            args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<long>(i));
        } else {
            ++i;
        }
    }
    return path;
}

int run(std::vector<std::string> args)
{
    CLI::App app{"Shape optimization over convex domains of prescribed area"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);
    app.set_version_flag("--version", "shapeopt 1.0");
    app.footer("Any command also accepts --config FILE with 'key = value' lines; flags override the file.");

    const std::uint64_t seed = default_seed();
    auto configure = [](CLI::App* sub) {
        sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        return sub;
    };

    GeometrySettings geo;
    auto* geometry = configure(app.add_subcommand("geometry", "convex polygon operations"));
    geometry->require_subcommand(1);
    std::string geometry_op;
    for (const char* op : {"area", "perimeter", "inradius", "hausdorff", "bonnesen", "dilate", "project"}) {
        auto* sub = configure(geometry->add_subcommand(op));
        sub->add_option("files", geo.files, "polygon file(s)")->required();
        if (std::string(op) == "dilate") {
            sub->add_option("--eps", geo.eps, "dilation radius")->capture_default_str();
            sub->add_option("--segments", geo.segments, "chords per corner arc")->capture_default_str();
        }
        if (std::string(op) == "project") {
            sub->add_option("--box", geo.box, "\"xmin ymin xmax ymax\" or a box file")->required();
            sub->add_option("--m", geo.m, "target area")->required();
            sub->add_option("--tol", geo.tol, "relative area tolerance")->capture_default_str();
        }
        sub->callback([&geometry_op, op] { geometry_op = op; });
    }

    EigenSettings eig;
    auto* eigen = configure(app.add_subcommand("eigen", "Dirichlet eigenvalues on a polygon"));
    eigen->add_option("--polygon", eig.polygon, "polygon file")->required();
    eigen->add_option("--k", eig.k, "number of eigenvalues")->capture_default_str();
    eigen->add_option("--h", eig.h, "mesh size")->capture_default_str();
    eig.coeff.add_to(eigen);

    SolveSettings sol;
    auto* solve = configure(app.add_subcommand("solve", "source problem and an integral functional"));
    solve->add_option("--polygon", sol.polygon, "polygon file")->required();
    solve->add_option("--f", sol.f, "source term f(x1, x2)")->capture_default_str();
    solve->add_option("--j", sol.j, "integrand j(x1, x2, u, ux, uy)")->capture_default_str();
    solve->add_option("--h", sol.h, "mesh size")->capture_default_str();
    solve->add_option("--csv", sol.csv, "write the nodal solution here");
    sol.coeff.add_to(solve);

    NewtonSettings nwt;
    nwt.seed = seed;
    auto* newton = configure(app.add_subcommand("newton", "minimal-resistance radial profile"));
    newton->add_option("--M", nwt.M, "height bound")->capture_default_str();
    newton->add_option("--R", nwt.R, "base radius")->capture_default_str();
    newton->add_option("--nr", nwt.nr, "radial cells")->capture_default_str();
    newton->add_option("--budget", nwt.budget, "objective evaluations")->capture_default_str();
    newton->add_option("--seed", nwt.seed, "random seed")->capture_default_str();
    newton->add_option("--out", nwt.out, "profile output file (empty: none)")->capture_default_str();

    OptimizeSettings opt;
    opt.seed = seed;
    auto* optimize = configure(app.add_subcommand("optimize", "minimize a shape functional over convex bodies"));
    optimize->add_option("--objective", opt.objective, "lambda1 | lambda | perimeter | boundary | source")
        ->capture_default_str();
    optimize->add_option("--box", opt.box, "\"xmin ymin xmax ymax\" or a box file")->capture_default_str();
    optimize->add_option("--m", opt.m, "prescribed area")->capture_default_str();
    optimize->add_option("--budget", opt.budget, "objective evaluations")->capture_default_str();
    optimize->add_option("--seed", opt.seed, "random seed")->capture_default_str();
    optimize->add_option("--k", opt.k, "eigenvalue index for 'lambda'")->capture_default_str();
    optimize->add_option("--ntheta", opt.ntheta, "radial resolution")->capture_default_str();
    optimize->add_option("--h", opt.h, "mesh size")->capture_default_str();
    optimize->add_option("--f", opt.f, "boundary integrand or source term");
    optimize->add_option("--j", opt.j, "integrand of the source functional");
    optimize->add_option("--trace-csv", opt.trace_csv, "write the accepted trace here");
    opt.coeff.add_to(optimize);

    VerifySettings ver;
    ver.seed = seed;
    auto* verify = configure(app.add_subcommand("verify", "run the property-check suite"));
    verify->add_option("--suite", ver.suite, "all | geometry | spectral | newton")->capture_default_str();
    verify->add_option("--seed", ver.seed, "random seed")->capture_default_str();
    verify->add_option("--instances", ver.instances, "random instances per check")->capture_default_str();

    // Config file arguments go right after the (sub)command name so that
    // explicit flags, which come later, win.
    if (const auto config = take_config(args)) {
        std::size_t at = 0;
        while (at < args.size() && args[at].rfind('-', 0) == 0)
            ++at;
        if (at == args.size())
            throw Error(Errc::InvalidArgument, "--config needs a command");
        CLI::App* target = app.get_subcommand_no_throw(args[at]);
        if (target == nullptr)
            throw Error(Errc::InvalidArgument, "unknown command '" + args[at] + "'");
        if (target == geometry) {
            ++at;
            while (at < args.size() && args[at].rfind('-', 0) == 0)
                ++at;
            target = at < args.size() ? geometry->get_subcommand_no_throw(args[at]) : nullptr;
            if (target == nullptr)
                throw Error(Errc::InvalidArgument, "--config needs a geometry operation");
        }
        const auto extra = config_arguments(*config, target);
        args.insert(args.begin() + static_cast<long>(at) + 1, extra.begin(), extra.end());
    }

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (geometry->parsed())
        return cmd_geometry(geometry_op, geo);
    if (eigen->parsed())
        return cmd_eigen(eig);
    if (solve->parsed())
        return cmd_solve(sol);
    if (newton->parsed())
        return cmd_newton(nwt);
    if (optimize->parsed())
        return cmd_optimize(opt);
    return cmd_verify(ver);
}

} // namespace

int main(int argc, char** argv)
{
    try {
        return run(std::vector<std::string>(argv + 1, argv + argc));
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return shapeopt::is_numeric_failure(e.code()) ? kExitNumeric : kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}
