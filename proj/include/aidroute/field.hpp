#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aidroute/geo.hpp"

namespace aidroute {

struct Cell {
  int row = 0;
  int col = 0;
  auto operator<=>(const Cell&) const = default;
};

// Raster geometry. Storage is row-major with the top (northernmost) row
// first; the origin is the CENTER of the lower-left cell, i.e. of cell
// (n_rows - 1, 0).
struct GridMeta {
  int n_rows = 0;
  int n_cols = 0;
  double cell_size_m = 100.0;
  double origin_lat = 0.0;
  double origin_lon = 0.0;
  double nodata = -9999.0;

  void validate() const;
  std::size_t cell_count() const {
    return static_cast<std::size_t>(n_rows) * static_cast<std::size_t>(n_cols);
  }
  bool in_bounds(Cell c) const {
    return c.row >= 0 && c.row < n_rows && c.col >= 0 && c.col < n_cols;
  }
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(n_cols) +
           static_cast<std::size_t>(c.col);
  }
  Cell cell_at(std::size_t i) const {
    return {static_cast<int>(i / static_cast<std::size_t>(n_cols)),
            static_cast<int>(i % static_cast<std::size_t>(n_cols))};
  }
  double deg_lat_per_cell() const;
  double deg_lon_per_cell() const;
  bool operator==(const GridMeta&) const = default;
};

// Planar position of a cell center in meters, relative to the origin cell
// center (x east, y north).
struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;
};
PlanarPoint cell_center_m(const GridMeta& meta, Cell c);
PlanarPoint latlon_to_planar(const GridMeta& meta, LatLon p);

LatLon cell_to_latlon(const GridMeta& meta, Cell c);
// Throws BoundsError when p falls outside the raster extent.
Cell latlon_to_cell(const GridMeta& meta, LatLon p);

// One value per cell; cells equal to meta.nodata are void.
struct GridLayer {
  GridMeta meta;
  std::vector<double> values;

  bool is_nodata(std::size_t i) const { return values[i] == meta.nodata; }
  bool is_nodata(Cell c) const { return is_nodata(meta.index(c)); }
  double at(Cell c) const { return values[meta.index(c)]; }
};

enum class RoadClass : std::uint8_t { none = 0, regional, national, divided, motorway };

// (motorway, divided, national, regional, none) -> (2, sqrt3, sqrt2, 1, 0).
double class_weight(RoadClass rc);
inline constexpr double kMaxClassWeight = 2.0;
RoadClass parse_road_class(std::string_view name);
std::string_view road_class_name(RoadClass rc);

struct Polyline {
  RoadClass road_class = RoadClass::none;
  std::vector<LatLon> vertices;
};

// A cell takes the highest class whose buffered segment contains its center.
// Segments outside the grid contribute nothing.
std::vector<RoadClass> rasterize_roads(std::span<const Polyline> polylines, const GridMeta& meta,
                                       double buffer_m = 50.0);

// Stacked altitude + road raster. Immutable after construction, so one
// instance can be shared by any number of concurrent walkers.
class Field {
 public:
  Field(GridMeta meta, std::vector<double> altitude, std::vector<RoadClass> road_class);

  // Rebuild from an altitude grid and an importance grid (as written by
  // importance_grid()). Importance values must be class weights.
  static Field from_layers(const GridLayer& altitude, const GridLayer& importance);

  const GridMeta& meta() const { return meta_; }
  bool in_bounds(Cell c) const { return meta_.in_bounds(c); }
  std::size_t index(Cell c) const { return meta_.index(c); }

  double altitude(Cell c) const { return altitude_[index(c)]; }
  bool is_void(Cell c) const { return altitude_[index(c)] == meta_.nodata; }
  double importance(Cell c) const { return importance_[index(c)]; }
  double importance_at(std::size_t i) const { return importance_[i]; }
  RoadClass road_class(Cell c) const { return road_class_[index(c)]; }
  bool is_road(Cell c) const { return importance_[index(c)] > 0.0; }

  std::span<const double> importance_layer() const { return importance_; }
  std::span<const double> altitude_layer() const { return altitude_; }
  std::size_t road_cell_count() const;

  GridLayer altitude_grid() const;
  GridLayer importance_grid() const;

 private:
  GridMeta meta_;
  std::vector<double> altitude_;
  std::vector<RoadClass> road_class_;
  std::vector<double> importance_;
};

// Deterministic test fields.
//   flat       no roads, altitude 0
//   loop-road  square ring of motorway cells `margin` cells in from each edge
//   grid-roads motorway rows and regional columns every `spacing` cells
//   moat       flat, the center cell is enclosed by its 8 neighbors set to NODATA
struct SynthSpec {
  std::string name = "flat";
  int n_rows = 101;
  int n_cols = 101;
  double cell_size_m = 100.0;
  int margin = 20;
  int spacing = 10;
  double origin_lat = 18.0;
  double origin_lon = -66.5;
};

Field synth_field(const SynthSpec& spec);
// The conventional start cell for a template: the top-middle ring cell for
// loop-road, the center otherwise.
Cell synth_origin(const SynthSpec& spec);

}  // namespace aidroute
