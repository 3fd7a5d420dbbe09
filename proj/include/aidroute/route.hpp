#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "aidroute/field.hpp"

namespace aidroute {

// Sensing stencil: the cell itself plus its 4 orthogonal neighbors, its 8
// Moore neighbors, or the 8 Moore neighbors plus the 4 cells at orthogonal
// distance 2.
enum class KnnRule : int { four = 4, eight = 8, twelve = 12 };

KnnRule knn_rule_from_int(int k);  // ConfigError unless k is 4, 8 or 12
inline int knn_rule_value(KnnRule r) { return static_cast<int>(r); }

struct Offset {
  int dr = 0;
  int dc = 0;
};
std::span<const Offset> stencil(KnnRule rule);  // includes {0, 0}
int stencil_radius(KnnRule rule);

// trapped: no feasible neighbor; exhausted: flight budget or proposal cap
// spent; home: the walk re-entered its origin cell.
enum class Scenario { trapped, exhausted, home };
std::string_view scenario_name(Scenario s);
Scenario parse_scenario(std::string_view s);

struct RouteResult {
  std::vector<Cell> cells;  // origin first; repeats allowed
  double distance_m = 0.0;
  Scenario scenario = Scenario::exhausted;
  double alpha = 0.0;
  double beta = 0.0;
  std::uint64_t seed = 0;
  double coverage = 0.0;  // road coverage over the base field
  std::uint64_t proposals = 0;

  bool is_home() const { return scenario == Scenario::home; }
};

}  // namespace aidroute
