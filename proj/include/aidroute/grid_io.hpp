#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "aidroute/field.hpp"

namespace aidroute {

// ESRI ASCII grid. Header keys (any order, case-insensitive): ncols, nrows,
// xllcorner|xllcenter, yllcorner|yllcenter, cellsize, NODATA_value
// (optional, default -9999). Coordinates are WGS84 degrees, cellsize is in
// meters. Data rows follow, top row first, one grid row per line.
GridLayer parse_grid(std::string_view text);

// Writes xllcenter/yllcenter so that parse_grid(serialize_grid(g)) == g
// exactly.
std::string serialize_grid(const GridLayer& layer);

// Road file: one road per line, `<class>\t<lat>,<lon> <lat>,<lon> ...`.
// Blank lines and lines starting with '#' are skipped.
std::vector<Polyline> parse_polylines(std::string_view text);

// Throws NotFoundError("<what> not found: <path>").
std::string read_text_file(const std::filesystem::path& path, std::string_view what = "file");
void write_text_file(const std::filesystem::path& path, std::string_view contents);

GridLayer read_grid_file(const std::filesystem::path& path, std::string_view what = "grid file");

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
// Fixed notation with `digits` after the point.
std::string format_fixed(double v, int digits);

double parse_double(std::string_view token, int line = 0);
long long parse_int(std::string_view token, int line = 0);
std::uint64_t parse_u64(std::string_view token, int line = 0);

std::vector<std::string_view> split_ws(std::string_view s);
std::vector<std::string_view> split_on(std::string_view s, char sep);
std::string_view trim(std::string_view s);

}  // namespace aidroute
