#include "aidroute/grid_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "aidroute/errors.hpp"

namespace aidroute {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::vector<std::string_view> split_on(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

double parse_double(std::string_view token, int line) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty())
    throw ParseError("expected a number, got '" + std::string(token) + "'", line);
  return v;
}

long long parse_int(std::string_view token, int line) {
  token = trim(token);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty())
    throw ParseError("expected an integer, got '" + std::string(token) + "'", line);
  return v;
}

std::uint64_t parse_u64(std::string_view token, int line) {
  token = trim(token);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty())
    throw ParseError("expected a non-negative integer, got '" + std::string(token) + "'", line);
  return v;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string format_fixed(double v, int digits) {
  std::array<char, 128> buf{};
  const auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, digits);
  return std::string(buf.data(), ptr);
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool looks_numeric(std::string_view tok) {
  if (tok.empty()) return false;
  const char c = tok.front();
  return std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.';
}

}  // namespace

GridLayer parse_grid(std::string_view text) {
  std::map<std::string, std::pair<double, int>> header;
  std::vector<std::pair<std::string_view, int>> data_lines;
  int line_no = 0;
  bool in_data = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto toks = split_ws(line);
    if (!in_data && !looks_numeric(toks.front())) {
      static const std::array<std::string_view, 9> kKeys{
          "ncols", "nrows", "xllcorner", "xllcenter", "yllcorner",
          "yllcenter", "cellsize", "nodata_value", "nodata"};
      const std::string key = lower(toks.front());
      if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end())
        throw ParseError("unknown header key '" + std::string(toks.front()) + "'", line_no);
      if (toks.size() != 2)
        throw ParseError("header line must be '<key> <value>'", line_no);
      const std::string canonical = key == "nodata" ? "nodata_value" : key;
      if (header.count(canonical))
        throw ParseError("duplicate header key '" + std::string(toks.front()) + "'", line_no);
      header[canonical] = {parse_double(toks[1], line_no), line_no};
    } else {
      in_data = true;
      data_lines.emplace_back(line, line_no);
    }
    if (end == text.size()) break;
  }

  auto require = [&](std::string_view key) -> double {
    auto it = header.find(std::string(key));
    if (it == header.end()) throw ParseError("missing header key '" + std::string(key) + "'");
    return it->second.first;
  };
  auto either = [&](std::string_view corner, std::string_view center) -> std::pair<double, bool> {
    const bool has_corner = header.count(std::string(corner)) > 0;
    const bool has_center = header.count(std::string(center)) > 0;
    if (has_corner && has_center)
      throw ParseError("both '" + std::string(corner) + "' and '" + std::string(center) +
                       "' given");
    if (has_center) return {header[std::string(center)].first, true};
    return {require(corner), false};
  };

  GridLayer layer;
  auto& meta = layer.meta;
  const double ncols = require("ncols");
  const double nrows = require("nrows");
  const auto [x0, x_is_center] = either("xllcorner", "xllcenter");
  const auto [y0, y_is_center] = either("yllcorner", "yllcenter");
  meta.cell_size_m = require("cellsize");
  if (header.count("nodata_value")) meta.nodata = header["nodata_value"].first;
  if (ncols != std::floor(ncols) || nrows != std::floor(nrows) || ncols < 1 || nrows < 1)
    throw ParseError("ncols and nrows must be positive integers");
  if (!(meta.cell_size_m > 0.0)) throw ParseError("cellsize must be positive");
  meta.n_cols = static_cast<int>(ncols);
  meta.n_rows = static_cast<int>(nrows);
  meta.origin_lat = y_is_center ? y0 : y0 + 0.5 * meta.deg_lat_per_cell();
  meta.origin_lon = x_is_center ? x0 : 0.0;
  if (!x_is_center) {
    // deg_lon_per_cell depends only on origin_lat, which is settled above.
    meta.origin_lon = x0 + 0.5 * meta.deg_lon_per_cell();
  }

  if (data_lines.size() != static_cast<std::size_t>(meta.n_rows))
    throw DimensionError("expected " + std::to_string(meta.n_rows) + " data rows, found " +
                         std::to_string(data_lines.size()));
  layer.values.reserve(meta.cell_count());
  for (const auto& [line, no] : data_lines) {
    const auto toks = split_ws(line);
    if (toks.size() != static_cast<std::size_t>(meta.n_cols))
      throw DimensionError("line " + std::to_string(no) + ": row has " +
                           std::to_string(toks.size()) + " values, expected " +
                           std::to_string(meta.n_cols));
    for (auto t : toks) layer.values.push_back(parse_double(t, no));
  }
  return layer;
}

std::string serialize_grid(const GridLayer& layer) {
  const auto& m = layer.meta;
  if (layer.values.size() != m.cell_count())
    throw DimensionError("layer size does not match its grid dimensions");
  std::string out;
  out.reserve(m.cell_count() * 4 + 200);
  out += "ncols " + std::to_string(m.n_cols) + "\n";
  out += "nrows " + std::to_string(m.n_rows) + "\n";
  out += "xllcenter " + format_double(m.origin_lon) + "\n";
  out += "yllcenter " + format_double(m.origin_lat) + "\n";
  out += "cellsize " + format_double(m.cell_size_m) + "\n";
  out += "NODATA_value " + format_double(m.nodata) + "\n";
  for (int r = 0; r < m.n_rows; ++r) {
    for (int c = 0; c < m.n_cols; ++c) {
      if (c) out += ' ';
      out += format_double(layer.values[m.index({r, c})]);
    }
    out += '\n';
  }
  return out;
}

std::vector<Polyline> parse_polylines(std::string_view text) {
  std::vector<Polyline> out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto toks = split_ws(line);
    Polyline pl;
    try {
      pl.road_class = parse_road_class(toks.front());
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
    for (std::size_t i = 1; i < toks.size(); ++i) {
      const auto parts = split_on(toks[i], ',');
      if (parts.size() != 2) throw ParseError("vertex must be '<lat>,<lon>'", line_no);
      pl.vertices.push_back({parse_double(parts[0], line_no), parse_double(parts[1], line_no)});
    }
    if (pl.vertices.size() < 2) throw ParseError("road needs at least two vertices", line_no);
    out.push_back(std::move(pl));
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path, std::string_view what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError(std::string(what) + " not found: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
}

GridLayer read_grid_file(const std::filesystem::path& path, std::string_view what) {
  const std::string text = read_text_file(path, what);
  try {
    return parse_grid(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const DimensionError& e) {
    throw DimensionError(path.string() + ": " + e.what());
  }
}

}  // namespace aidroute
