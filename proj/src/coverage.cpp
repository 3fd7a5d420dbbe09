#include "aidroute/coverage.hpp"

#include <algorithm>
#include <iterator>

#include "aidroute/errors.hpp"
#include "aidroute/walker.hpp"

namespace aidroute {

double road_coverage(std::span<const Cell> cells, const Field& field) {
  std::vector<std::size_t> idx;
  idx.reserve(cells.size());
  for (const Cell& c : cells) {
    if (!field.in_bounds(c)) throw InputError("route cell outside the grid");
    idx.push_back(field.index(c));
  }
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  double sum = 0.0;
  for (std::size_t i : idx) sum += field.importance_at(i);
  return sum;
}

std::vector<std::size_t> covered_cells(std::span<const Cell> cells, const Field& field,
                                       KnnRule rule) {
  std::vector<std::size_t> out;
  for (const Cell& c : cells) {
    if (!field.in_bounds(c)) throw InputError("route cell outside the grid");
    for (const Offset& o : stencil(rule)) {
      const Cell s{c.row + o.dr, c.col + o.dc};
      if (field.in_bounds(s) && field.is_road(s)) out.push_back(field.index(s));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

CoverageReport ccr(std::span<const Cell> a, std::span<const Cell> b, const Field& field,
                   KnnRule rule, CcrArea area) {
  CoverageReport rep;
  const auto ca = covered_cells(a, field, rule);
  const auto cb = covered_cells(b, field, rule);
  std::vector<std::size_t> uni;
  std::set_union(ca.begin(), ca.end(), cb.begin(), cb.end(), std::back_inserter(uni));
  rep.net_coverage = uni.size();

  if (a.empty() && b.empty()) return rep;
  BoundingBox box{field.meta().n_rows, field.meta().n_cols, -1, -1};
  for (auto route : {a, b})
    for (const Cell& c : route) {
      box.row0 = std::min(box.row0, c.row);
      box.col0 = std::min(box.col0, c.col);
      box.row1 = std::max(box.row1, c.row);
      box.col1 = std::max(box.col1, c.col);
    }
  const int pad = stencil_radius(rule);
  box.row0 = std::max(0, box.row0 - pad);
  box.col0 = std::max(0, box.col0 - pad);
  box.row1 = std::min(field.meta().n_rows - 1, box.row1 + pad);
  box.col1 = std::min(field.meta().n_cols - 1, box.col1 + pad);
  rep.bbox = box;
  for (int r = box.row0; r <= box.row1; ++r)
    for (int c = box.col0; c <= box.col1; ++c)
      if (area == CcrArea::all || field.is_road({r, c})) ++rep.area;
  if (rep.area > 0)
    rep.ccr = static_cast<double>(rep.net_coverage) / static_cast<double>(rep.area);
  return rep;
}

PairResult best_pair(std::span<const RouteResult> routes, const Field& field, KnnRule rule,
                     CcrArea area) {
  std::vector<std::size_t> home;
  for (std::size_t i = 0; i < routes.size(); ++i)
    if (routes[i].is_home()) home.push_back(i);
  if (home.size() < 2)
    throw InsufficientRoutesError("need at least two home routes to pair, got " +
                                  std::to_string(home.size()));

  std::optional<PairResult> best;
  double best_dist = 0.0;
  for (std::size_t x = 0; x < home.size(); ++x)
    for (std::size_t y = x + 1; y < home.size(); ++y) {
      const std::size_t i = home[x];
      const std::size_t j = home[y];
      auto rep = ccr(routes[i].cells, routes[j].cells, field, rule, area);
      const double dist = routes[i].distance_m + routes[j].distance_m;
      bool better = false;
      if (!best) {
        better = true;
      } else {
        const double cur = rep.ccr.value_or(-1.0);
        const double top = best->report.ccr.value_or(-1.0);
        if (cur != top) better = cur > top;
        else if (dist != best_dist) better = dist < best_dist;
      }
      if (better) {
        rep.route_ids = {i, j};
        best = PairResult{i, j, std::move(rep)};
        best_dist = dist;
      }
    }
  return *best;
}

}  // namespace aidroute
