#include "aidroute/walker.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "aidroute/coverage.hpp"
#include "aidroute/errors.hpp"

namespace aidroute {

KnnRule knn_rule_from_int(int k) {
  switch (k) {
    case 4: return KnnRule::four;
    case 8: return KnnRule::eight;
    case 12: return KnnRule::twelve;
  }
  throw ConfigError("knn rule must be 4, 8 or 12, got " + std::to_string(k));
}

std::span<const Offset> stencil(KnnRule rule) {
  static constexpr std::array<Offset, 5> k4{{{0, 0}, {-1, 0}, {1, 0}, {0, -1}, {0, 1}}};
  static constexpr std::array<Offset, 9> k8{
      {{0, 0}, {-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1}}};
  static constexpr std::array<Offset, 13> k12{{{0, 0},
                                               {-1, -1},
                                               {-1, 0},
                                               {-1, 1},
                                               {0, -1},
                                               {0, 1},
                                               {1, -1},
                                               {1, 0},
                                               {1, 1},
                                               {-2, 0},
                                               {2, 0},
                                               {0, -2},
                                               {0, 2}}};
  switch (rule) {
    case KnnRule::four: return k4;
    case KnnRule::eight: return k8;
    case KnnRule::twelve: return k12;
  }
  return k8;
}

int stencil_radius(KnnRule rule) { return rule == KnnRule::twelve ? 2 : 1; }

std::string_view scenario_name(Scenario s) {
  switch (s) {
    case Scenario::trapped: return "trapped";
    case Scenario::exhausted: return "exhausted";
    case Scenario::home: return "home";
  }
  return "exhausted";
}

Scenario parse_scenario(std::string_view s) {
  if (s == "trapped") return Scenario::trapped;
  if (s == "exhausted") return Scenario::exhausted;
  if (s == "home") return Scenario::home;
  throw ParseError("unknown scenario '" + std::string(s) + "'");
}

void WalkParams::validate() const {
  if (!(mfd_m > 0.0)) throw ConfigError("walk budget (mfd_m) must be positive");
  if (!(decay > 0.0 && decay <= 1.0)) throw ConfigError("decay must lie in (0, 1]");
  if (max_climb_m && !(*max_climb_m >= 0.0)) throw ConfigError("max_climb_m must be >= 0");
  if (!std::isfinite(alpha) || !std::isfinite(beta)) throw ConfigError("alpha/beta must be finite");
}

std::uint64_t WalkParams::proposal_cap(double cell_size_m) const {
  if (max_proposals) return *max_proposals;
  return static_cast<std::uint64_t>(std::ceil(10.0 * mfd_m / cell_size_m));
}

void Overlay::decay(std::size_t cell, double factor) {
  if (factor >= 1.0) return;
  auto [it, inserted] = mult_.try_emplace(cell, factor);
  if (!inserted) it->second *= factor;
}

double BonusLayer::max_value() const {
  double m = 0.0;
  for (const auto& [cell, v] : bonus_) m = std::max(m, v);
  return m;
}

NeighborSet feasible_neighbors(const Field& field, Cell cell, const WalkParams& params) {
  NeighborSet out;
  const double here = field.altitude(cell);
  for (int dr = -1; dr <= 1; ++dr)
    for (int dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) continue;
      const Cell n{cell.row + dr, cell.col + dc};
      if (!field.in_bounds(n) || field.is_void(n)) continue;
      if (params.max_climb_m && std::abs(field.altitude(n) - here) > *params.max_climb_m) continue;
      out.cells[out.size++] = n;
    }
  return out;
}

double sense_road(const Field& field, const Overlay& overlay, Cell cell, KnnRule rule,
                  const BonusLayer* bonus) {
  double sum = 0.0;
  for (const Offset& o : stencil(rule)) {
    const Cell s{cell.row + o.dr, cell.col + o.dc};
    if (!field.in_bounds(s)) continue;
    const std::size_t i = field.index(s);
    double v = field.importance_at(i);
    if (bonus) v += bonus->at(i);
    if (v != 0.0) sum += v * overlay.multiplier(i);
  }
  return sum;
}

double gamma_weight(double d_m, const WalkParams& params) {
  const double t = d_m / params.mfd_m - params.beta;
  return params.alpha * t * t * t;
}

std::vector<double> softmax(std::span<const double> x) {
  std::vector<double> out(x.begin(), x.end());
  if (out.empty()) return out;
  const double m = *std::max_element(out.begin(), out.end());
  double s = 0.0;
  for (auto& v : out) {
    v = std::exp(v - m);
    s += v;
  }
  for (auto& v : out) v /= s;
  return out;
}

namespace {

void softmax_into(std::span<const double> x, std::span<double> out) {
  double m = x[0];
  for (double v : x) m = std::max(m, v);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = std::exp(x[i] - m);
    s += out[i];
  }
  for (std::size_t i = 0; i < x.size(); ++i) out[i] /= s;
}

}  // namespace

NeighborScores score_neighbors(const Field& field, const Overlay& overlay,
                               const NeighborSet& neighbors, Cell origin, const WalkParams& params,
                               const BonusLayer* bonus) {
  NeighborScores s;
  s.size = neighbors.size;
  if (s.size == 0) return s;
  std::array<double, 8> road{};
  std::array<double, 8> home{};
  const LatLon o = cell_to_latlon(field.meta(), origin);
  const double cs = field.meta().cell_size_m;
  for (std::size_t i = 0; i < s.size; ++i) {
    const Cell c = neighbors.cells[i];
    road[i] = params.road_attraction ? sense_road(field, overlay, c, params.knn_rule, bonus) : 0.0;
    home[i] = -haversine_m(cell_to_latlon(field.meta(), c), o) / cs;
  }
  softmax_into({road.data(), s.size}, {s.p_road.data(), s.size});
  softmax_into({home.data(), s.size}, {s.p_home.data(), s.size});
  return s;
}

double objective(const Field& field, const Overlay& overlay, const NeighborSet& neighbors,
                 Cell proposed, Cell origin, double d_m, const WalkParams& params,
                 const BonusLayer* bonus) {
  if (neighbors.empty()) throw InputError("objective needs at least one neighbor");
  const auto view = neighbors.view();
  const auto it = std::find(view.begin(), view.end(), proposed);
  if (it == view.end()) throw InputError("proposed cell is not a feasible neighbor");
  const auto k = static_cast<std::size_t>(it - view.begin());
  const auto s = score_neighbors(field, overlay, neighbors, origin, params, bonus);
  const double g = params.home_attraction ? gamma_weight(d_m, params) : 0.0;
  return std::clamp(s.p_road[k] + g * s.p_home[k], 0.0, 1.0);
}

Walk::Walk(const Field& field, Cell origin, const WalkParams& params, const BonusLayer* bonus)
    : field_(field),
      origin_(origin),
      params_(params),
      bonus_(bonus),
      cap_(0),
      rng_(params.seed) {
  params_.validate();
  if (!field_.in_bounds(origin_)) throw InputError("walk origin lies outside the grid");
  if (field_.is_void(origin_)) throw InputError("walk origin is a NODATA cell");
  cap_ = params_.proposal_cap(field_.meta().cell_size_m);
  state_.position = origin_;
  state_.cells.push_back(origin_);
  refresh();
}

void Walk::refresh() {
  neighbors_ = feasible_neighbors(field_, state_.position, params_);
  scores_ = score_neighbors(field_, state_.overlay, neighbors_, origin_, params_, bonus_);
  const double g = params_.home_attraction ? gamma_weight(state_.distance_m, params_) : 0.0;
  for (std::size_t i = 0; i < neighbors_.size; ++i)
    f_[i] = std::clamp(scores_.p_road[i] + g * scores_.p_home[i], 0.0, 1.0);
}

double Walk::step_length(Cell a, Cell b) const {
  const double cs = field_.meta().cell_size_m;
  return (a.row != b.row && a.col != b.col) ? cs * std::numbers::sqrt2 : cs;
}

std::optional<StepOutcome> Walk::step() {
  if (done()) return std::nullopt;
  if (neighbors_.empty()) {
    state_.scenario = Scenario::trapped;
    return std::nullopt;
  }
  if (state_.distance_m + field_.meta().cell_size_m > params_.mfd_m ||
      state_.proposals >= cap_) {
    state_.scenario = Scenario::exhausted;
    return std::nullopt;
  }
  ++state_.proposals;
  const std::size_t k = rng_.index(neighbors_.size);
  StepOutcome out;
  out.proposed = neighbors_.cells[k];
  out.f = f_[k];
  for (std::size_t i = 0; i < scores_.size; ++i) {
    out.road_softmax_sum += scores_.p_road[i];
    out.home_softmax_sum += scores_.p_home[i];
  }
  const double len = step_length(state_.position, out.proposed);
  if (state_.distance_m + len > params_.mfd_m) {
    out.over_budget = true;
    return out;
  }
  if (!(rng_.uniform() < out.f)) return out;

  out.accepted = true;
  for (int dr = -1; dr <= 1; ++dr)
    for (int dc = -1; dc <= 1; ++dc) {
      const Cell n{out.proposed.row + dr, out.proposed.col + dc};
      if (field_.in_bounds(n)) state_.overlay.decay(field_.index(n), params_.decay);
    }
  state_.position = out.proposed;
  state_.distance_m += len;
  state_.cells.push_back(out.proposed);
  if (out.proposed == origin_) {
    state_.scenario = Scenario::home;
    return out;
  }
  refresh();
  return out;
}

RouteResult Walk::result() const {
  RouteResult r;
  r.cells = state_.cells;
  r.distance_m = state_.distance_m;
  r.scenario = state_.scenario.value_or(Scenario::exhausted);
  r.alpha = params_.alpha;
  r.beta = params_.beta;
  r.seed = params_.seed;
  r.coverage = road_coverage(r.cells, field_);
  r.proposals = state_.proposals;
  return r;
}

RouteResult walk(const Field& field, Cell origin, const WalkParams& params,
                 const BonusLayer* bonus) {
  Walk w(field, origin, params, bonus);
  while (!w.done()) w.step();
  return w.result();
}

BonusLayer experience_bonus(std::span<const RouteResult> routes, const Field& field,
                            double top_fraction) {
  BonusLayer layer;
  if (routes.empty()) return layer;
  if (!(top_fraction > 0.0 && top_fraction <= 1.0))
    throw ConfigError("top_fraction must lie in (0, 1]");
  std::vector<const RouteResult*> ranked;
  for (const auto& r : routes) {
    if (!r.is_home()) throw InputError("experience bonus accepts home routes only");
    ranked.push_back(&r);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RouteResult* a, const RouteResult* b) { return a->coverage > b->coverage; });
  const auto n_top = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(top_fraction * static_cast<double>(ranked.size()))));
  std::map<std::size_t, int> visits;
  for (std::size_t i = 0; i < n_top; ++i) {
    std::set<std::size_t> distinct;
    for (const Cell& c : ranked[i]->cells) distinct.insert(field.index(c));
    for (std::size_t c : distinct) ++visits[c];
  }
  const double cap = 0.5 * kMaxClassWeight;
  for (const auto& [cell, count] : visits)
    layer.set(cell, cap * static_cast<double>(count) / static_cast<double>(n_top));
  return layer;
}

}  // namespace aidroute
