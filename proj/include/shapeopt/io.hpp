#pragma once

#include "shapeopt/fem.hpp"
#include "shapeopt/functionals.hpp"
#include "shapeopt/geometry.hpp"
#include "shapeopt/optimizer.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace shapeopt::io {

using Json = nlohmann::ordered_json;

/// Reads the whole file; throws InvalidArgument if it cannot be opened.
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

/// Polygon text: one "x y" pair per line, '#' starts a comment.
std::vector<Vec2> parse_points(std::string_view text);
/// As parse_points, but the points must be in convex position.
ConvexPolygon parse_polygon(std::string_view text);
std::string format_polygon(const ConvexPolygon& poly);

/// "xmin ymin xmax ymax", whitespace or comma separated.
Box parse_box(std::string_view text);

/// First line "R M n_r", then n_r + 1 heights, one per line.
RadialProfile parse_profile(std::string_view text);
std::string format_profile(const RadialProfile& p);

Json to_json(const ConvexPolygon& poly);
Json to_json(const Spectrum& s);
Json to_json(const BonnesenReport& b);
Json to_json(const OptResult& r);

/// "x,y,u" per node.
std::string solution_csv(const FieldSolution& sol);
/// "iteration,value" per accepted step.
std::string trace_csv(const OptResult& r);

} // namespace shapeopt::io
