#include "aidroute/route_io.hpp"

#include <algorithm>
#include <cmath>

#include "aidroute/errors.hpp"
#include "aidroute/grid_io.hpp"

namespace aidroute {

using nlohmann::ordered_json;

namespace {

std::vector<std::vector<std::string_view>> csv_rows(std::string_view csv,
                                                    std::string_view header) {
  std::vector<std::vector<std::string_view>> rows;
  const auto want = split_on(header, ',');
  bool header_seen = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t end = csv.find('\n', pos);
    if (end == std::string_view::npos) end = csv.size();
    const std::string_view line = trim(csv.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_on(line, ',');
    if (!header_seen) {
      if (fields != want) throw ParseError("expected header '" + std::string(header) + "'", line_no);
      header_seen = true;
      continue;
    }
    if (fields.size() != want.size())
      throw ParseError("expected " + std::to_string(want.size()) + " fields", line_no);
    rows.push_back(std::move(fields));
  }
  if (!header_seen) throw ParseError("missing header '" + std::string(header) + "'");
  return rows;
}

ordered_json latlon_json(LatLon p) { return ordered_json{{"lat", p.lat}, {"lon", p.lon}}; }

}  // namespace

std::string route_csv(const RouteResult& route, const GridMeta& meta) {
  std::string out = "step,row,col,cum_dist_m\n";
  double cum = 0.0;
  for (std::size_t i = 0; i < route.cells.size(); ++i) {
    const Cell c = route.cells[i];
    if (i > 0) {
      const Cell p = route.cells[i - 1];
      const bool diagonal = p.row != c.row && p.col != c.col;
      cum += diagonal ? meta.cell_size_m * std::sqrt(2.0) : meta.cell_size_m;
    }
    out += std::to_string(i) + "," + std::to_string(c.row) + "," + std::to_string(c.col) + "," +
           format_fixed(cum, 3) + "\n";
  }
  return out;
}

std::vector<Cell> parse_route_csv(std::string_view csv) {
  std::vector<Cell> cells;
  int line = 1;
  for (const auto& f : csv_rows(csv, "step,row,col,cum_dist_m")) {
    ++line;
    cells.push_back({static_cast<int>(parse_int(f[1], line)), static_cast<int>(parse_int(f[2], line))});
  }
  return cells;
}

ordered_json route_summary_json(const RouteResult& route) {
  return ordered_json{{"scenario", std::string(scenario_name(route.scenario))},
                      {"distance_m", route.distance_m},
                      {"alpha", route.alpha},
                      {"beta", route.beta},
                      {"seed", route.seed},
                      {"coverage", route.coverage}};
}

RouteResult parse_route_summary(std::string_view json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("route summary: ") + e.what());
  }
  RouteResult r;
  try {
    r.scenario = parse_scenario(j.at("scenario").get<std::string>());
    r.distance_m = j.at("distance_m").get<double>();
    r.alpha = j.at("alpha").get<double>();
    r.beta = j.at("beta").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.coverage = j.at("coverage").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("route summary: ") + e.what());
  }
  return r;
}

std::string results_csv(std::span<const RouteResult> results) {
  std::string out = "seed,alpha,beta,scenario,distance_m,coverage\n";
  for (const auto& r : results)
    out += std::to_string(r.seed) + "," + format_double(r.alpha) + "," + format_double(r.beta) +
           "," + std::string(scenario_name(r.scenario)) + "," + format_double(r.distance_m) + "," +
           format_double(r.coverage) + "\n";
  return out;
}

std::vector<RouteResult> parse_results_csv(std::string_view csv) {
  std::vector<RouteResult> out;
  int line = 1;
  for (const auto& f : csv_rows(csv, "seed,alpha,beta,scenario,distance_m,coverage")) {
    ++line;
    RouteResult r;
    r.seed = parse_u64(f[0], line);
    r.alpha = parse_double(f[1], line);
    r.beta = parse_double(f[2], line);
    try {
      r.scenario = parse_scenario(f[3]);
    } catch (const Error& e) {
      throw ParseError(e.what(), line);
    }
    r.distance_m = parse_double(f[4], line);
    r.coverage = parse_double(f[5], line);
    out.push_back(std::move(r));
  }
  return out;
}

std::string packing_witness_csv(std::span<const Box> boxes, std::span<const Placement> placements) {
  std::string out = "box_id,kind,x,y,z,orient\n";
  for (const auto& p : placements)
    out += std::to_string(p.box) + "," + boxes[p.box].kind + "," + format_double(p.x) + "," +
           format_double(p.y) + "," + format_double(p.z) + "," + std::to_string(p.orientation) +
           "\n";
  return out;
}

std::string render_pgm(const Field& field, std::span<const std::vector<Cell>> routes) {
  const GridMeta& m = field.meta();
  std::vector<unsigned char> px(m.cell_count(), 40);
  for (std::size_t i = 0; i < px.size(); ++i) {
    const Cell c = m.cell_at(i);
    if (field.is_void(c))
      px[i] = 0;
    else if (field.is_road(c))
      px[i] = static_cast<unsigned char>(
          std::lround(80.0 + 60.0 * field.importance(c) / kMaxClassWeight));
  }
  for (std::size_t r = routes.size(); r-- > 0;) {
    const auto shade = static_cast<unsigned char>(std::max(160, 255 - 40 * static_cast<int>(r)));
    for (const Cell c : routes[r])
      if (m.in_bounds(c)) px[m.index(c)] = shade;
  }
  std::string out = "P5\n" + std::to_string(m.n_cols) + " " + std::to_string(m.n_rows) + "\n255\n";
  out.append(px.begin(), px.end());
  return out;
}

ordered_json to_json(const PlanTable& table) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : table.rows)
    rows.push_back({{"destination", r.destination},
                    {"drone", r.drone},
                    {"rank", r.rank},
                    {"med_counts", r.plan.counts},
                    {"weight_lb", r.plan.total_weight_lb},
                    {"distance_km", r.distance_km}});
  return ordered_json{{"rows", rows}, {"unservable", table.unservable}};
}

ordered_json to_json(const BasePlan& plan) {
  ordered_json clusters = ordered_json::array();
  for (const auto& c : plan.clusters) {
    ordered_json cj{{"centroid", latlon_json(c.centroid)},
                    {"destinations", c.destinations},
                    {"delivery_drone", c.delivery.drone},
                    {"common_drone", c.delivery.common},
                    {"delivery_per_destination", c.delivery.per_destination},
                    {"drones", c.drones}};
    if (!c.warnings.empty()) cj["warnings"] = c.warnings;
    clusters.push_back(std::move(cj));
  }
  return ordered_json{{"k", plan.k},
                      {"feasible", plan.feasible},
                      {"initial_weight", plan.initial_weight},
                      {"destination_weight", plan.oversample_weight},
                      {"partition", plan.partition},
                      {"bases", clusters}};
}

ordered_json to_json(const ContainerConfig& config) {
  return ordered_json{{"drones", config.drones},
                      {"med_counts", config.meds},
                      {"supporting_days", config.supporting_days},
                      {"remaining_volume_in3", config.remaining_volume_in3}};
}

ordered_json to_json(const CoverageReport& report) {
  ordered_json j{{"route_ids", report.route_ids},
                 {"net_coverage", report.net_coverage},
                 {"area", report.area}};
  j["ccr"] = report.ccr ? ordered_json(*report.ccr) : ordered_json(nullptr);
  j["bbox"] = {{"row0", report.bbox.row0},
               {"col0", report.bbox.col0},
               {"row1", report.bbox.row1},
               {"col1", report.bbox.col1}};
  return j;
}

ordered_json to_json(const FitResult& fit) {
  const LogNormalParams p = fit.params();
  return ordered_json{{"mu", fit.mu},          {"sigma", fit.sigma}, {"mean", p.mean()},
                      {"variance", p.variance()}, {"r_squared", fit.r_squared},
                      {"n", fit.sample_n}};
}

ordered_json to_json(const Regression& reg) {
  return ordered_json{{"slope", reg.slope},
                      {"intercept", reg.intercept},
                      {"r_squared", reg.r_squared},
                      {"n", reg.n}};
}

ordered_json to_json(const Histogram& hist) {
  return ordered_json{{"lo", hist.lo}, {"hi", hist.hi}, {"counts", hist.counts}};
}

ordered_json to_json(const RuleSummary& row) {
  return ordered_json{{"knn_rule", knn_rule_value(row.rule)},
                      {"walks", row.walks},
                      {"mean_distance_m", row.mean_distance_m},
                      {"mean_coverage", row.mean_coverage},
                      {"home_rate", row.home_rate}};
}

std::string dump_json(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace aidroute
