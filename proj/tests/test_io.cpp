#include <random>
#include <sstream>

#include "doctest.h"

#include "aidroute/catalog_io.hpp"
#include "aidroute/errors.hpp"
#include "aidroute/fleet.hpp"
#include "aidroute/grid_io.hpp"
#include "aidroute/route_io.hpp"

using namespace aidroute;

TEST_CASE("drone catalog round trip") {
  const auto cat = default_drone_catalog();
  const auto back = parse_drone_catalog(serialize_drone_catalog(cat));
  REQUIRE(back.size() == cat.size());
  for (std::size_t i = 0; i < cat.size(); ++i) {
    CHECK(back[i].model == cat[i].model);
    CHECK(back[i].mpc_lb == cat[i].mpc_lb);
    CHECK(back[i].speed_kmh == cat[i].speed_kmh);
    CHECK(back[i].flight_time_min == cat[i].flight_time_min);
    CHECK(back[i].bay.has_value() == cat[i].bay.has_value());
    if (back[i].bay) CHECK(*back[i].bay == *cat[i].bay);
    CHECK(back[i].video == cat[i].video);
  }
}

TEST_CASE("drone catalog parse errors") {
  const std::string header = "model,mpc_lb,speed_kmh,flight_time_min,bay_l,bay_w,bay_h,video\n";
  CHECK(parse_drone_catalog(header + "Q,5,50,30,,,,no\n")[0].bay == std::nullopt);
  CHECK(parse_drone_catalog(header + "Q,5,50,30,1,2,3,yes\n")[0].video);
  CHECK_THROWS_AS(parse_drone_catalog("model,mpc\nQ,5\n"), ParseError);
  try {
    parse_drone_catalog(header + "Q,5,50,30,1,2,3,yes\nR,x,50,30,1,2,3,yes\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_drone_catalog(header + "Q,5,50,30,1,2,3,maybe\n"), ParseError);
  CHECK_THROWS_AS(parse_drone_catalog(header + "Q,5,50,30,1,2,3\n"), ParseError);
}

TEST_CASE("package catalog round trip") {
  PackageCatalog cat;
  const auto back = parse_package_catalog(serialize_package_catalog(cat));
  for (int i = 0; i < 3; ++i) {
    CHECK(back.meds[i].kind == cat.meds[i].kind);
    CHECK(back.meds[i].dims == cat.meds[i].dims);
    CHECK(back.meds[i].weight_lb == cat.meds[i].weight_lb);
  }
  CHECK(back.crates == cat.crates);
  CHECK_THROWS_AS(parse_package_catalog("kind,l,w,h,weight_lb\nMED1,1,1,1,1\n"), ParseError);
}

TEST_CASE("destinations") {
  const auto d = parse_destinations(
      "name,lat,lon,med1_per_day,med2_per_day,med3_per_day\n"
      "CMC,18.33,-65.65,1,0,1\n");
  REQUIRE(d.size() == 1);
  CHECK(d[0].name == "CMC");
  CHECK(d[0].pos.lon == -65.65);
  CHECK(d[0].daily == MedCounts{1, 0, 1});
  CHECK_THROWS_AS(parse_destinations("name,lat,lon,med1_per_day,med2_per_day,med3_per_day\n"
                                     "A,18,-66,1,0,0\nA,18,-66,1,0,0\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_destinations("name,lat,lon,med1_per_day,med2_per_day,med3_per_day\n"
                                     "A,18,-66,-1,0,0\n"),
                  ParseError);
}

TEST_CASE("route files") {
  GridMeta m;
  m.n_rows = 10;
  m.n_cols = 10;
  RouteResult r;
  r.cells = {{5, 5}, {5, 6}, {6, 7}, {5, 6}, {5, 5}};
  r.distance_m = 200 + 200 * std::sqrt(2.0);
  r.scenario = Scenario::home;
  r.alpha = 0.125;
  r.beta = 0.3;
  r.seed = 0xdeadbeefcafeULL;
  r.coverage = 7.25;
  const std::string csv = route_csv(r, m);
  CHECK(csv.rfind("step,row,col,cum_dist_m\n", 0) == 0);
  CHECK(csv.find("\n2,6,7,241.421\n") != std::string::npos);
  CHECK(parse_route_csv(csv) == r.cells);

  const RouteResult s = parse_route_summary(dump_json(route_summary_json(r)));
  CHECK(s.scenario == r.scenario);
  CHECK(s.distance_m == r.distance_m);
  CHECK(s.alpha == r.alpha);
  CHECK(s.seed == r.seed);
  CHECK(s.coverage == r.coverage);
  CHECK_THROWS(parse_route_summary("{\"scenario\": \"lost\"}"));
}

TEST_CASE("results table round trip") {
  std::mt19937_64 g(1);
  std::uniform_real_distribution<double> u(0, 3);
  std::vector<RouteResult> rs;
  for (int i = 0; i < 50; ++i) {
    RouteResult r;
    r.seed = g();
    r.alpha = u(g);
    r.beta = u(g);
    r.scenario = static_cast<Scenario>(i % 3);
    r.distance_m = u(g) * 10000;
    r.coverage = u(g) * 100;
    rs.push_back(r);
  }
  const std::string csv = results_csv(rs);
  CHECK(csv.rfind("seed,alpha,beta,scenario,distance_m,coverage\n", 0) == 0);
  const auto back = parse_results_csv(csv);
  REQUIRE(back.size() == rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    CHECK(back[i].seed == rs[i].seed);
    CHECK(back[i].alpha == rs[i].alpha);
    CHECK(back[i].scenario == rs[i].scenario);
    CHECK(back[i].coverage == rs[i].coverage);
  }
  CHECK(results_csv(back) == csv);
}

TEST_CASE("number formatting") {
  for (double v : {0.1, 1.0 / 3.0, 52666.666666666664, -1e-300, 12345678.9})
    CHECK(parse_double(format_double(v)) == v);
  CHECK(format_fixed(47.0638, 2) == "47.06");
  CHECK_THROWS_AS(parse_double("1.5x"), ParseError);
}

TEST_CASE("missing files") {
  try {
    read_text_file("/nonexistent/roads.txt", "roads file");
    FAIL("expected NotFoundError");
  } catch (const NotFoundError& e) {
    CHECK(std::string(e.what()).find("roads file not found") != std::string::npos);
  }
}

TEST_CASE("PGM rendering") {
  SynthSpec s;
  s.name = "loop-road";
  s.n_rows = 30;
  s.n_cols = 40;
  s.margin = 5;
  const Field f = synth_field(s);
  const std::vector<std::vector<Cell>> routes{{{5, 10}, {5, 11}}, {{6, 10}}};
  const std::string pgm = render_pgm(f, routes);
  const std::string header = "P5\n40 30\n255\n";
  REQUIRE(pgm.rfind(header, 0) == 0);
  CHECK(pgm.size() == header.size() + 30 * 40);
  auto px = [&](int r, int c) { return static_cast<unsigned char>(pgm[header.size() + r * 40 + c]); };
  CHECK(px(5, 10) == 255);
  CHECK(px(6, 10) < 255);
  CHECK(px(6, 10) > px(5, 20));
  CHECK(px(5, 20) > px(0, 0));
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(NotFoundError("x")) == 2);
  CHECK(exit_code_for(ParseError("x")) == 3);
  CHECK(exit_code_for(DimensionError("x")) == 3);
  CHECK(exit_code_for(ConfigError("x")) == 3);
  CHECK(exit_code_for(PlanningError("x")) == 4);
  CHECK(exit_code_for(InsufficientRoutesError("x")) == 5);
  CHECK(exit_code_for(std::runtime_error("x")) == 1);
}
