#include "shapeopt/io.hpp"

#include "shapeopt/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace shapeopt::io {

namespace {

std::string_view strip_comment(std::string_view line)
{
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
        line = line.substr(0, hash);
    return line;
}

// Splits on whitespace and commas and parses every token as a double.
std::vector<double> numbers(std::string_view line, std::string_view what, int line_no)
{
    std::vector<double> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (std::isspace(static_cast<unsigned char>(line[i])) || line[i] == ','))
            ++i;
        if (i == line.size())
            break;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != ',')
            ++j;
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + j, v);
        if (ec != std::errc() || ptr != line.data() + j || !std::isfinite(v))
            throw Error(Errc::InvalidArgument, std::string(what) + " line " + std::to_string(line_no) +
                                                   ": bad number '" + std::string(line.substr(i, j - i)) + "'");
        out.push_back(v);
        i = j;
    }
    return out;
}

// Non-empty data lines with their 1-based line numbers.
std::vector<std::pair<int, std::vector<double>>> data_lines(std::string_view text, std::string_view what)
{
    std::vector<std::pair<int, std::vector<double>>> out;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = std::min(text.find('\n', pos), text.size());
        ++line_no;
        auto row = numbers(strip_comment(text.substr(pos, end - pos)), what, line_no);
        if (!row.empty())
            out.emplace_back(line_no, std::move(row));
        pos = end + 1;
    }
    return out;
}

std::string format_double(double v)
{
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

} // namespace

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::InvalidArgument, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(Errc::InvalidArgument, "cannot write " + path.string());
    out << text;
}

std::vector<Vec2> parse_points(std::string_view text)
{
    std::vector<Vec2> pts;
    for (const auto& [line_no, row] : data_lines(text, "polygon")) {
        if (row.size() != 2)
            throw Error(Errc::InvalidArgument, "polygon line " + std::to_string(line_no) + ": expected 'x y'");
        pts.push_back({row[0], row[1]});
    }
    return pts;
}

ConvexPolygon parse_polygon(std::string_view text)
{
    return polygon_from_vertices(parse_points(text));
}

std::string format_polygon(const ConvexPolygon& poly)
{
    std::string out;
    for (const Vec2& v : poly.vertices())
        out += format_double(v.x) + " " + format_double(v.y) + "\n";
    return out;
}

Box parse_box(std::string_view text)
{
    const auto rows = data_lines(text, "box");
    std::vector<double> all;
    for (const auto& [line_no, row] : rows)
        all.insert(all.end(), row.begin(), row.end());
    if (all.size() != 4)
        throw Error(Errc::InvalidArgument, "box needs exactly four numbers 'xmin ymin xmax ymax'");
    return Box({all[0], all[1]}, {all[2], all[3]});
}

RadialProfile parse_profile(std::string_view text)
{
    const auto rows = data_lines(text, "profile");
    if (rows.empty() || rows.front().second.size() != 3)
        throw Error(Errc::InvalidArgument, "profile header must be 'R M n_r'");
    const auto& head = rows.front().second;
    const double n_r = head[2];
    if (n_r < 1 || n_r != std::floor(n_r) || n_r > 1e7)
        throw Error(Errc::InvalidArgument, "profile n_r must be a positive integer");
    RadialProfile p;
    p.radius = head[0];
    p.max_height = head[1];
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].second.size() != 1)
            throw Error(Errc::InvalidArgument, "profile line " + std::to_string(rows[i].first) + ": expected one height");
        p.heights.push_back(rows[i].second[0]);
    }
    if (p.heights.size() != static_cast<std::size_t>(n_r) + 1)
        throw Error(Errc::InvalidArgument, "profile needs n_r + 1 heights");
    p.validate();
    return p;
}

std::string format_profile(const RadialProfile& p)
{
    std::string out = format_double(p.radius) + " " + format_double(p.max_height) + " " + std::to_string(p.cells()) + "\n";
    for (double u : p.heights)
        out += format_double(u) + "\n";
    return out;
}

Json to_json(const ConvexPolygon& poly)
{
    Json v = Json::array();
    for (const Vec2& p : poly.vertices())
        v.push_back({p.x, p.y});
    return v;
}

Json to_json(const Spectrum& s)
{
    return {{"eigenvalues", s.eigenvalues}, {"h", s.h}, {"dof", s.dof}};
}

Json to_json(const BonnesenReport& b)
{
    return {{"area", b.area}, {"perimeter", b.perimeter}, {"inradius", b.inradius}, {"slack", b.slack}};
}

Json to_json(const OptResult& r)
{
    Json trace = Json::array();
    for (const auto& t : r.trace)
        trace.push_back({t.iteration, t.value});
    return {{"best_value", r.best_value},
            {"vertices", to_json(r.best)},
            {"trace", trace},
            {"evaluations", r.evaluations},
            {"projection", {{"projected", r.stats.projected},
                            {"rejected", r.stats.rejected},
                            {"max_area_error", r.stats.max_area_error}}}};
}

std::string solution_csv(const FieldSolution& sol)
{
    std::string out = "x,y,u\n";
    for (std::size_t i = 0; i < sol.u.size(); ++i)
        out += format_double(sol.mesh.nodes[i].x) + "," + format_double(sol.mesh.nodes[i].y) + "," +
               format_double(sol.u[i]) + "\n";
    return out;
}

std::string trace_csv(const OptResult& r)
{
    std::string out = "iteration,value\n";
    for (const auto& t : r.trace)
        out += std::to_string(t.iteration) + "," + format_double(t.value) + "\n";
    return out;
}

} // namespace shapeopt::io
