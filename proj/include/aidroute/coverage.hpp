#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "aidroute/field.hpp"
#include "aidroute/route.hpp"

namespace aidroute {

// Sum of base-field importance over the distinct cells of a route.
double road_coverage(std::span<const Cell> cells, const Field& field);

// Road cells (importance > 0) inside the sensing stencil of any route cell,
// as sorted, unique cell indices.
std::vector<std::size_t> covered_cells(std::span<const Cell> cells, const Field& field,
                                       KnnRule rule);

// Denominator of the combined coverage rate: road cells (default) or all
// cells of the bounding box.
enum class CcrArea { road, all };

struct BoundingBox {
  int row0 = 0;
  int col0 = 0;
  int row1 = -1;
  int col1 = -1;
};

struct CoverageReport {
  std::vector<std::size_t> route_ids;
  std::size_t net_coverage = 0;  // NC: covered road cells of the union
  std::size_t area = 0;          // A: cells counted in the bounding box
  std::optional<double> ccr;     // NC / A; empty when A == 0
  BoundingBox bbox;
};

// The bounding box encloses both routes and is padded by the stencil radius,
// so every covered cell lies inside it and NC <= A.
CoverageReport ccr(std::span<const Cell> a, std::span<const Cell> b, const Field& field,
                   KnnRule rule, CcrArea area = CcrArea::road);

struct PairResult {
  std::size_t first = 0;
  std::size_t second = 0;
  CoverageReport report;
};

// Exhaustive search over pairs of home routes for the highest CCR. Ties go
// to the smaller combined distance, then to the lexicographically smaller
// index pair. Throws InsufficientRoutesError with fewer than two home routes.
PairResult best_pair(std::span<const RouteResult> routes, const Field& field, KnnRule rule,
                     CcrArea area = CcrArea::road);

}  // namespace aidroute
