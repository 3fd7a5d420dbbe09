#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"

#include "aidroute/errors.hpp"
#include "aidroute/field.hpp"
#include "aidroute/geo.hpp"
#include "aidroute/grid_io.hpp"

using namespace aidroute;

namespace {

const char* kTwoByTwo =
    "ncols 2\n"
    "nrows 2\n"
    "xllcorner -66.5\n"
    "yllcorner 18.0\n"
    "cellsize 100\n"
    "NODATA_value -9999\n"
    "1 2\n"
    "3 4\n";

GridMeta small_meta(int rows = 21, int cols = 31) {
  GridMeta m;
  m.n_rows = rows;
  m.n_cols = cols;
  m.cell_size_m = 100.0;
  m.origin_lat = 18.2;
  m.origin_lon = -66.4;
  return m;
}

Polyline line(RoadClass rc, LatLon a, LatLon b) { return {rc, {a, b}}; }

}  // namespace

TEST_CASE("parse_grid reads a 2x2 grid top row first") {
  const GridLayer g = parse_grid(kTwoByTwo);
  CHECK(g.meta.n_rows == 2);
  CHECK(g.meta.n_cols == 2);
  CHECK(g.meta.cell_size_m == 100.0);
  CHECK(g.values == std::vector<double>{1, 2, 3, 4});
  CHECK(g.at({0, 1}) == 2);
  CHECK(g.at({1, 0}) == 3);
}

TEST_CASE("parse_grid flags nodata cells") {
  std::string text = kTwoByTwo;
  text.replace(text.find("1 2"), 3, "-9999 2");
  const GridLayer g = parse_grid(text);
  CHECK(g.is_nodata(Cell{0, 0}));
  CHECK_FALSE(g.is_nodata(Cell{0, 1}));
}

TEST_CASE("parse_grid errors") {
  SUBCASE("missing cellsize names the key") {
    std::string text = kTwoByTwo;
    text.erase(text.find("cellsize"), std::string("cellsize 100\n").size());
    try {
      parse_grid(text);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("cellsize") != std::string::npos);
    }
  }
  SUBCASE("malformed header value carries a line number") {
    std::string text = kTwoByTwo;
    text.replace(text.find("cellsize 100"), 12, "cellsize abc");
    try {
      parse_grid(text);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 5);
    }
  }
  SUBCASE("short row") {
    std::string text = kTwoByTwo;
    text.replace(text.find("3 4"), 3, "3");
    CHECK_THROWS_AS(parse_grid(text), DimensionError);
  }
  SUBCASE("missing row") {
    std::string text = kTwoByTwo;
    text.erase(text.find("3 4"));
    CHECK_THROWS_AS(parse_grid(text), DimensionError);
  }
}

TEST_CASE("xllcorner and xllcenter describe the same raster") {
  std::string center = kTwoByTwo;
  center.replace(center.find("xllcorner -66.5"), 15, "xllcenter -66.5");
  const GridLayer a = parse_grid(kTwoByTwo);
  const GridLayer b = parse_grid(center);
  CHECK(b.meta.origin_lon == -66.5);
  CHECK(a.meta.origin_lon > -66.5);
  CHECK(a.meta.origin_lon == doctest::Approx(-66.5 + a.meta.deg_lon_per_cell() / 2).epsilon(1e-12));
}

TEST_CASE("serialize_grid round-trips exactly") {
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> u(-50.0, 1500.0);
  GridLayer layer;
  layer.meta = small_meta(7, 5);
  layer.meta.origin_lat = 18.123456789;
  layer.meta.origin_lon = -66.987654321;
  for (std::size_t i = 0; i < layer.meta.cell_count(); ++i)
    layer.values.push_back(i % 6 == 0 ? layer.meta.nodata : u(g));
  const GridLayer back = parse_grid(serialize_grid(layer));
  CHECK(back.meta == layer.meta);
  CHECK(back.values == layer.values);
  CHECK(serialize_grid(back) == serialize_grid(layer));
}

TEST_CASE("cell and lat/lon conversions") {
  const GridMeta m = small_meta();
  const LatLon o = cell_to_latlon(m, {m.n_rows - 1, 0});
  CHECK(o.lat == m.origin_lat);
  CHECK(o.lon == m.origin_lon);
  CHECK(latlon_to_cell(m, {m.origin_lat, m.origin_lon}) == Cell{m.n_rows - 1, 0});
  CHECK_THROWS_AS(latlon_to_cell(m, {m.origin_lat, m.origin_lon - m.deg_lon_per_cell()}),
                  BoundsError);
  CHECK_THROWS_AS(latlon_to_cell(m, {m.origin_lat + m.n_rows * m.deg_lat_per_cell(), m.origin_lon}),
                  BoundsError);

  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> fr(-0.49, m.n_rows - 0.51), fc(-0.49, m.n_cols - 0.51);
  for (int i = 0; i < 500; ++i) {
    const LatLon p{m.origin_lat + fr(g) * m.deg_lat_per_cell(),
                   m.origin_lon + fc(g) * m.deg_lon_per_cell()};
    const Cell c = latlon_to_cell(m, p);
    CHECK(latlon_to_cell(m, cell_to_latlon(m, c)) == c);
    // Half the cell diagonal bounds the quantization error.
    CHECK(haversine_m(cell_to_latlon(m, c), p) <= m.cell_size_m * std::sqrt(0.5) * 1.001);
  }
}

TEST_CASE("haversine matches a known arc") {
  // One degree of latitude on the mean-radius sphere.
  CHECK(haversine_km({0, 0}, {1, 0}) == doctest::Approx(6371.0088 * M_PI / 180.0).epsilon(1e-12));
  CHECK(haversine_m({18, -66}, {18, -66}) == 0.0);
}

TEST_CASE("rasterize_roads marks exactly the row under a horizontal motorway") {
  const GridMeta m = small_meta();
  const int r = 10, c0 = 5, c1 = 22;
  const LatLon a = cell_to_latlon(m, {r, c0});
  const LatLon b = cell_to_latlon(m, {r, c1});
  const std::vector<Polyline> roads{line(RoadClass::motorway, a, b)};
  const auto classes = rasterize_roads(roads, m, 50.0);
  for (int row = 0; row < m.n_rows; ++row)
    for (int col = 0; col < m.n_cols; ++col) {
      // Cell centers sit on a 100 m lattice, so only the road's own row is
      // within 50 m of a segment running along cell centers.
      const bool want = row == r && col >= c0 && col <= c1;
      CHECK((classes[m.index({row, col})] == RoadClass::motorway) == want);
    }
}

TEST_CASE("rasterize_roads buffer follows cell-center distance") {
  const GridMeta m = small_meta();
  const LatLon a = cell_to_latlon(m, {10, 5});
  const LatLon b = cell_to_latlon(m, {10, 25});
  const std::vector<Polyline> roads{line(RoadClass::regional, a, b)};
  // 150 m covers rows 9..11 (100 m away) but not rows 8 and 12 (200 m).
  const auto classes = rasterize_roads(roads, m, 150.0);
  CHECK(classes[m.index({9, 15})] == RoadClass::regional);
  CHECK(classes[m.index({11, 15})] == RoadClass::regional);
  CHECK(classes[m.index({8, 15})] == RoadClass::none);
  CHECK(classes[m.index({12, 15})] == RoadClass::none);
  // Past the end vertex: col 26 is 100 m out, col 27 is 200 m out.
  CHECK(classes[m.index({10, 26})] == RoadClass::regional);
  CHECK(classes[m.index({10, 27})] == RoadClass::none);
}

TEST_CASE("rasterize_roads keeps the highest class") {
  const GridMeta m = small_meta();
  const LatLon a = cell_to_latlon(m, {10, 0});
  const LatLon b = cell_to_latlon(m, {10, 30});
  const LatLon c = cell_to_latlon(m, {0, 15});
  const LatLon d = cell_to_latlon(m, {20, 15});
  std::vector<Polyline> roads{line(RoadClass::regional, a, b), line(RoadClass::national, c, d)};
  auto classes = rasterize_roads(roads, m);
  CHECK(classes[m.index({10, 15})] == RoadClass::national);
  CHECK(class_weight(classes[m.index({10, 15})]) == doctest::Approx(std::sqrt(2.0)));
  CHECK(classes[m.index({10, 3})] == RoadClass::regional);
  std::reverse(roads.begin(), roads.end());
  CHECK(rasterize_roads(roads, m) == classes);
}

TEST_CASE("rasterize_roads edge cases") {
  const GridMeta m = small_meta();
  const auto empty = rasterize_roads({}, m);
  CHECK(std::all_of(empty.begin(), empty.end(), [](RoadClass rc) { return rc == RoadClass::none; }));
  // Entirely outside the grid.
  const std::vector<Polyline> far{line(RoadClass::motorway, {10.0, -60.0}, {10.5, -60.5})};
  const auto none = rasterize_roads(far, m);
  CHECK(std::all_of(none.begin(), none.end(), [](RoadClass rc) { return rc == RoadClass::none; }));
}

TEST_CASE("rasterize_roads is order independent") {
  const GridMeta m = small_meta();
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> ulat(m.origin_lat - 0.01, m.origin_lat + 0.03);
  std::uniform_real_distribution<double> ulon(m.origin_lon - 0.01, m.origin_lon + 0.04);
  std::uniform_int_distribution<int> cls(1, 4);
  std::vector<Polyline> roads;
  for (int i = 0; i < 12; ++i)
    roads.push_back({static_cast<RoadClass>(cls(g)), {{ulat(g), ulon(g)}, {ulat(g), ulon(g)}, {ulat(g), ulon(g)}}});
  const auto ref = rasterize_roads(roads, m);
  for (int i = 0; i < 5; ++i) {
    std::shuffle(roads.begin(), roads.end(), g);
    CHECK(rasterize_roads(roads, m) == ref);
  }
}

TEST_CASE("class weights") {
  CHECK(class_weight(RoadClass::motorway) == 2.0);
  CHECK(class_weight(RoadClass::divided) == doctest::Approx(std::sqrt(3.0)));
  CHECK(class_weight(RoadClass::national) == doctest::Approx(std::sqrt(2.0)));
  CHECK(class_weight(RoadClass::regional) == 1.0);
  CHECK(class_weight(RoadClass::none) == 0.0);
  CHECK(parse_road_class("motorway") == RoadClass::motorway);
  CHECK(road_class_name(RoadClass::divided) == "divided");
  CHECK_THROWS(parse_road_class("footpath"));
}

TEST_CASE("parse_polylines") {
  const auto roads = parse_polylines(
      "# comment\n"
      "motorway\t18.1,-66.2 18.2,-66.1\n"
      "\n"
      "regional\t18.0,-66.0 18.0,-66.1 18.1,-66.1\n");
  REQUIRE(roads.size() == 2);
  CHECK(roads[0].road_class == RoadClass::motorway);
  CHECK(roads[1].vertices.size() == 3);
  CHECK(roads[1].vertices[2].lat == 18.1);
  CHECK_THROWS_AS(parse_polylines("motorway\t18.1,-66.2\n"), ParseError);
  CHECK_THROWS_AS(parse_polylines("motorway\t18.1;-66.2 18.2,-66.1\n"), ParseError);
}

TEST_CASE("synthetic fields") {
  SUBCASE("loop-road ring at margin 20") {
    SynthSpec s;
    s.name = "loop-road";
    const Field f = synth_field(s);
    CHECK(f.meta().n_rows == 101);
    for (int r = 0; r < 101; ++r)
      for (int c = 0; c < 101; ++c) {
        const bool inside = r >= 20 && r <= 80 && c >= 20 && c <= 80;
        const bool ring = inside && (r == 20 || r == 80 || c == 20 || c == 80);
        CHECK(f.importance({r, c}) == (ring ? 2.0 : 0.0));
      }
    CHECK(f.is_road(synth_origin(s)));
  }
  SUBCASE("flat has no roads") {
    const Field f = synth_field(SynthSpec{});
    CHECK(f.road_cell_count() == 0);
  }
  SUBCASE("moat encloses the origin") {
    SynthSpec s;
    s.name = "moat";
    const Field f = synth_field(s);
    const Cell o = synth_origin(s);
    CHECK_FALSE(f.is_void(o));
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc)
        if (dr || dc) CHECK(f.is_void({o.row + dr, o.col + dc}));
  }
  SUBCASE("grid-roads") {
    SynthSpec s;
    s.name = "grid-roads";
    s.spacing = 10;
    const Field f = synth_field(s);
    CHECK(f.road_class({10, 3}) == RoadClass::motorway);
    CHECK(f.road_class({3, 10}) == RoadClass::regional);
    CHECK(f.road_class({3, 3}) == RoadClass::none);
  }
  SUBCASE("deterministic and validated") {
    SynthSpec s;
    s.name = "loop-road";
    const Field a = synth_field(s), b = synth_field(s);
    CHECK(std::equal(a.importance_layer().begin(), a.importance_layer().end(),
                     b.importance_layer().begin()));
    s.name = "volcano";
    CHECK_THROWS_AS(synth_field(s), ConfigError);
  }
}

TEST_CASE("Field layers round-trip through importance grids") {
  SynthSpec s;
  s.name = "grid-roads";
  s.n_rows = 30;
  s.n_cols = 40;
  const Field f = synth_field(s);
  const Field back = Field::from_layers(parse_grid(serialize_grid(f.altitude_grid())),
                                        parse_grid(serialize_grid(f.importance_grid())));
  for (int r = 0; r < 30; ++r)
    for (int c = 0; c < 40; ++c) CHECK(back.road_class({r, c}) == f.road_class({r, c}));

  GridLayer wrong = f.importance_grid();
  wrong.meta.n_cols -= 1;
  wrong.values.resize(wrong.meta.cell_count());
  CHECK_THROWS_AS(Field::from_layers(f.altitude_grid(), wrong), DimensionError);

  GridLayer odd = f.importance_grid();
  odd.values[0] = 0.7;
  CHECK_THROWS(Field::from_layers(f.altitude_grid(), odd));
}
