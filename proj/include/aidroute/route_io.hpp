#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "aidroute/coverage.hpp"
#include "aidroute/field.hpp"
#include "aidroute/packing.hpp"
#include "aidroute/route.hpp"
#include "aidroute/sensitivity.hpp"
#include "aidroute/siting.hpp"

namespace aidroute {

// step,row,col,cum_dist_m. Step lengths are recomputed from the cell size.
std::string route_csv(const RouteResult& route, const GridMeta& meta);
std::vector<Cell> parse_route_csv(std::string_view csv);

// {scenario, distance_m, alpha, beta, seed, coverage}
nlohmann::ordered_json route_summary_json(const RouteResult& route);
// Reads a summary back; cells stay empty.
RouteResult parse_route_summary(std::string_view json_text);

// seed,alpha,beta,scenario,distance_m,coverage
std::string results_csv(std::span<const RouteResult> results);
std::vector<RouteResult> parse_results_csv(std::string_view csv);

// box_id,kind,x,y,z,orient
std::string packing_witness_csv(std::span<const Box> boxes, std::span<const Placement> placements);

// Binary greymap of the field (void 0, land 40, roads brighter with class)
// with each route drawn on top, the first route at 255, later ones darker.
std::string render_pgm(const Field& field, std::span<const std::vector<Cell>> routes);

nlohmann::ordered_json to_json(const PlanTable& table);
nlohmann::ordered_json to_json(const BasePlan& plan);
nlohmann::ordered_json to_json(const ContainerConfig& config);
nlohmann::ordered_json to_json(const CoverageReport& report);
nlohmann::ordered_json to_json(const FitResult& fit);
nlohmann::ordered_json to_json(const Regression& reg);
nlohmann::ordered_json to_json(const Histogram& hist);
nlohmann::ordered_json to_json(const RuleSummary& row);

// Two-space indent plus a trailing newline.
std::string dump_json(const nlohmann::ordered_json& j);

}  // namespace aidroute
