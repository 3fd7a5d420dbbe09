#include "aidroute/field.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "aidroute/errors.hpp"

namespace aidroute {

void GridMeta::validate() const {
  if (n_rows < 1 || n_cols < 1)
    throw DimensionError("grid must have at least one row and one column");
  if (!(cell_size_m > 0.0)) throw ConfigError("cell size must be positive");
}

double GridMeta::deg_lat_per_cell() const {
  return cell_size_m / LocalProjection(origin_lat).m_per_deg_lat();
}

double GridMeta::deg_lon_per_cell() const {
  return cell_size_m / LocalProjection(origin_lat).m_per_deg_lon();
}

PlanarPoint cell_center_m(const GridMeta& meta, Cell c) {
  return {c.col * meta.cell_size_m, (meta.n_rows - 1 - c.row) * meta.cell_size_m};
}

PlanarPoint latlon_to_planar(const GridMeta& meta, LatLon p) {
  const LocalProjection proj(meta.origin_lat);
  return {(p.lon - meta.origin_lon) * proj.m_per_deg_lon(),
          (p.lat - meta.origin_lat) * proj.m_per_deg_lat()};
}

LatLon cell_to_latlon(const GridMeta& meta, Cell c) {
  return {meta.origin_lat + (meta.n_rows - 1 - c.row) * meta.deg_lat_per_cell(),
          meta.origin_lon + c.col * meta.deg_lon_per_cell()};
}

Cell latlon_to_cell(const GridMeta& meta, LatLon p) {
  const double fr = (p.lat - meta.origin_lat) / meta.deg_lat_per_cell();
  const double fc = (p.lon - meta.origin_lon) / meta.deg_lon_per_cell();
  if (!(fr >= -0.5 && fr < meta.n_rows - 0.5 && fc >= -0.5 && fc < meta.n_cols - 0.5))
    throw BoundsError("point (" + std::to_string(p.lat) + ", " + std::to_string(p.lon) +
                      ") lies outside the grid");
  const int up = std::clamp(static_cast<int>(std::floor(fr + 0.5)), 0, meta.n_rows - 1);
  const int col = std::clamp(static_cast<int>(std::floor(fc + 0.5)), 0, meta.n_cols - 1);
  return {meta.n_rows - 1 - up, col};
}

double class_weight(RoadClass rc) {
  switch (rc) {
    case RoadClass::motorway: return 2.0;
    case RoadClass::divided: return std::sqrt(3.0);
    case RoadClass::national: return std::sqrt(2.0);
    case RoadClass::regional: return 1.0;
    case RoadClass::none: return 0.0;
  }
  return 0.0;
}

RoadClass parse_road_class(std::string_view name) {
  if (name == "motorway") return RoadClass::motorway;
  if (name == "divided") return RoadClass::divided;
  if (name == "national") return RoadClass::national;
  if (name == "regional") return RoadClass::regional;
  if (name == "none") return RoadClass::none;
  throw ParseError("unknown road class '" + std::string(name) + "'");
}

std::string_view road_class_name(RoadClass rc) {
  switch (rc) {
    case RoadClass::motorway: return "motorway";
    case RoadClass::divided: return "divided";
    case RoadClass::national: return "national";
    case RoadClass::regional: return "regional";
    case RoadClass::none: return "none";
  }
  return "none";
}

namespace {

double point_segment_distance(PlanarPoint p, PlanarPoint a, PlanarPoint b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
  const double ex = a.x + t * dx - p.x;
  const double ey = a.y + t * dy - p.y;
  return std::sqrt(ex * ex + ey * ey);
}

}  // namespace

std::vector<RoadClass> rasterize_roads(std::span<const Polyline> polylines, const GridMeta& meta,
                                       double buffer_m) {
  meta.validate();
  std::vector<RoadClass> out(meta.cell_count(), RoadClass::none);
  const double cs = meta.cell_size_m;
  for (const auto& line : polylines) {
    if (line.vertices.size() < 2) throw InputError("polyline needs at least two vertices");
    for (std::size_t s = 0; s + 1 < line.vertices.size(); ++s) {
      const PlanarPoint a = latlon_to_planar(meta, line.vertices[s]);
      const PlanarPoint b = latlon_to_planar(meta, line.vertices[s + 1]);
      // Candidate window in (col, up-row) index space, clipped to the grid.
      const int c0 = std::max(0, static_cast<int>(std::floor((std::min(a.x, b.x) - buffer_m) / cs)));
      const int c1 = std::min(meta.n_cols - 1,
                              static_cast<int>(std::ceil((std::max(a.x, b.x) + buffer_m) / cs)));
      const int u0 = std::max(0, static_cast<int>(std::floor((std::min(a.y, b.y) - buffer_m) / cs)));
      const int u1 = std::min(meta.n_rows - 1,
                              static_cast<int>(std::ceil((std::max(a.y, b.y) + buffer_m) / cs)));
      for (int up = u0; up <= u1; ++up) {
        for (int col = c0; col <= c1; ++col) {
          const Cell cell{meta.n_rows - 1 - up, col};
          if (point_segment_distance(cell_center_m(meta, cell), a, b) > buffer_m) continue;
          auto& slot = out[meta.index(cell)];
          if (class_weight(line.road_class) > class_weight(slot)) slot = line.road_class;
        }
      }
    }
  }
  return out;
}

Field::Field(GridMeta meta, std::vector<double> altitude, std::vector<RoadClass> road_class)
    : meta_(meta), altitude_(std::move(altitude)), road_class_(std::move(road_class)) {
  meta_.validate();
  if (altitude_.size() != meta_.cell_count() || road_class_.size() != meta_.cell_count())
    throw DimensionError("field layers do not match grid dimensions " +
                         std::to_string(meta_.n_rows) + "x" + std::to_string(meta_.n_cols));
  importance_.resize(road_class_.size());
  std::transform(road_class_.begin(), road_class_.end(), importance_.begin(), class_weight);
}

Field Field::from_layers(const GridLayer& altitude, const GridLayer& importance) {
  const auto& a = altitude.meta;
  const auto& b = importance.meta;
  if (a.n_rows != b.n_rows || a.n_cols != b.n_cols)
    throw DimensionError("altitude grid is " + std::to_string(a.n_rows) + "x" +
                         std::to_string(a.n_cols) + " but importance grid is " +
                         std::to_string(b.n_rows) + "x" + std::to_string(b.n_cols));
  if (a.cell_size_m != b.cell_size_m) throw DimensionError("grids disagree on cell size");
  static constexpr std::array kClasses{RoadClass::none, RoadClass::regional, RoadClass::national,
                                       RoadClass::divided, RoadClass::motorway};
  std::vector<RoadClass> classes(importance.values.size(), RoadClass::none);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (importance.is_nodata(i)) continue;
    const double v = importance.values[i];
    auto it = std::find_if(kClasses.begin(), kClasses.end(),
                           [v](RoadClass rc) { return std::abs(class_weight(rc) - v) < 1e-6; });
    if (it == kClasses.end())
      throw ParseError("importance value " + std::to_string(v) + " is not a road class weight");
    classes[i] = *it;
  }
  return Field(a, altitude.values, std::move(classes));
}

std::size_t Field::road_cell_count() const {
  return static_cast<std::size_t>(
      std::count_if(importance_.begin(), importance_.end(), [](double v) { return v > 0.0; }));
}

GridLayer Field::altitude_grid() const { return {meta_, altitude_}; }

GridLayer Field::importance_grid() const { return {meta_, importance_}; }

Field synth_field(const SynthSpec& spec) {
  GridMeta meta;
  meta.n_rows = spec.n_rows;
  meta.n_cols = spec.n_cols;
  meta.cell_size_m = spec.cell_size_m;
  meta.origin_lat = spec.origin_lat;
  meta.origin_lon = spec.origin_lon;
  meta.validate();

  std::vector<double> altitude(meta.cell_count(), 0.0);
  std::vector<RoadClass> roads(meta.cell_count(), RoadClass::none);
  auto set_road = [&](int r, int c, RoadClass rc) {
    if (meta.in_bounds({r, c})) {
      auto& slot = roads[meta.index({r, c})];
      if (class_weight(rc) > class_weight(slot)) slot = rc;
    }
  };

  if (spec.name == "flat") {
  } else if (spec.name == "loop-road") {
    const int m = spec.margin;
    const int r1 = spec.n_rows - 1 - m;
    const int c1 = spec.n_cols - 1 - m;
    if (m < 0 || r1 <= m || c1 <= m) throw ConfigError("loop-road margin too large for grid");
    for (int c = m; c <= c1; ++c) {
      set_road(m, c, RoadClass::motorway);
      set_road(r1, c, RoadClass::motorway);
    }
    for (int r = m; r <= r1; ++r) {
      set_road(r, m, RoadClass::motorway);
      set_road(r, c1, RoadClass::motorway);
    }
  } else if (spec.name == "grid-roads") {
    if (spec.spacing < 1) throw ConfigError("grid-roads spacing must be >= 1");
    for (int r = 0; r < spec.n_rows; ++r)
      for (int c = 0; c < spec.n_cols; ++c) {
        if (r % spec.spacing == 0) set_road(r, c, RoadClass::motorway);
        if (c % spec.spacing == 0) set_road(r, c, RoadClass::regional);
      }
  } else if (spec.name == "moat") {
    const Cell o = synth_origin(spec);
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc) {
        const Cell n{o.row + dr, o.col + dc};
        if ((dr != 0 || dc != 0) && meta.in_bounds(n)) altitude[meta.index(n)] = meta.nodata;
      }
  } else {
    throw ConfigError("unknown field template '" + spec.name + "'");
  }
  return Field(meta, std::move(altitude), std::move(roads));
}

Cell synth_origin(const SynthSpec& spec) {
  if (spec.name == "loop-road") return {spec.margin, spec.n_cols / 2};
  return {spec.n_rows / 2, spec.n_cols / 2};
}

}  // namespace aidroute
