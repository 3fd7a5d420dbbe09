#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "aidroute/field.hpp"
#include "aidroute/rng.hpp"
#include "aidroute/route.hpp"

namespace aidroute {

struct WalkParams {
  double alpha = 0.2;
  double beta = 0.3;
  double mfd_m = 52666.666666666664;  // drone B, unloaded
  KnnRule knn_rule = KnnRule::eight;
  double decay = 0.5;
  std::optional<std::uint64_t> max_proposals;  // default 10 * mfd / cell size
  std::optional<double> max_climb_m;           // per-step |altitude change| bound
  std::uint64_t seed = 0;
  // Ablation switches. Without road attraction every neighbor senses the
  // same road value; without home attraction gamma is 0.
  bool road_attraction = true;
  bool home_attraction = true;

  void validate() const;
  std::uint64_t proposal_cap(double cell_size_m) const;
};

// Per-walk multiplicative decay on top of the shared field. Cells never
// touched have multiplier 1.
class Overlay {
 public:
  double multiplier(std::size_t cell) const {
    auto it = mult_.find(cell);
    return it == mult_.end() ? 1.0 : it->second;
  }
  void decay(std::size_t cell, double factor);
  std::size_t size() const { return mult_.size(); }
  bool operator==(const Overlay& o) const { return mult_ == o.mult_; }

 private:
  std::unordered_map<std::size_t, double> mult_;
};

// Additive importance learned from earlier good routes.
class BonusLayer {
 public:
  double at(std::size_t cell) const {
    auto it = bonus_.find(cell);
    return it == bonus_.end() ? 0.0 : it->second;
  }
  void set(std::size_t cell, double v) { bonus_[cell] = v; }
  std::size_t size() const { return bonus_.size(); }
  double max_value() const;

 private:
  std::unordered_map<std::size_t, double> bonus_;
};

struct NeighborSet {
  std::array<Cell, 8> cells{};
  std::size_t size = 0;
  std::span<const Cell> view() const { return {cells.data(), size}; }
  bool empty() const { return size == 0; }
};

// In-bounds, non-void 8-connected neighbors within the climb limit.
NeighborSet feasible_neighbors(const Field& field, Cell cell, const WalkParams& params);

// Decayed (importance + bonus) summed over the stencil centered at cell;
// stencil cells off the grid count 0.
double sense_road(const Field& field, const Overlay& overlay, Cell cell, KnnRule rule,
                  const BonusLayer* bonus = nullptr);

// Relative weight of home attraction: alpha * (d / MFD - beta)^3.
double gamma_weight(double d_m, const WalkParams& params);

// Numerically stable softmax.
std::vector<double> softmax(std::span<const double> x);

// Softmaxed road and home attraction over a neighbor set. Home attraction is
// minus the straight-line distance to the origin in cell units, so cells
// nearer home score higher.
struct NeighborScores {
  std::array<double, 8> p_road{};
  std::array<double, 8> p_home{};
  std::size_t size = 0;
};
NeighborScores score_neighbors(const Field& field, const Overlay& overlay,
                               const NeighborSet& neighbors, Cell origin, const WalkParams& params,
                               const BonusLayer* bonus = nullptr);

// f = clamp(p_road(proposed) + gamma(d) * p_home(proposed), 0, 1).
double objective(const Field& field, const Overlay& overlay, const NeighborSet& neighbors,
                 Cell proposed, Cell origin, double d_m, const WalkParams& params,
                 const BonusLayer* bonus = nullptr);

// Observable walker state; a rejected proposal changes nothing but the
// proposal counter.
struct WalkState {
  Cell position;
  double distance_m = 0.0;
  Overlay overlay;
  std::vector<Cell> cells;
  std::uint64_t proposals = 0;
  std::optional<Scenario> scenario;
};

struct StepOutcome {
  Cell proposed;
  double f = 0.0;
  bool accepted = false;
  bool over_budget = false;
  double road_softmax_sum = 0.0;
  double home_softmax_sum = 0.0;
};

// One biased random walk: propose a uniformly chosen feasible neighbor,
// evaluate it, accept when a uniform draw falls below the objective.
// Accepting decays the new cell and its 8 neighbors in the overlay.
class Walk {
 public:
  Walk(const Field& field, Cell origin, const WalkParams& params,
       const BonusLayer* bonus = nullptr);

  bool done() const { return state_.scenario.has_value(); }
  // Runs one proposal (or detects termination). No-op once done.
  std::optional<StepOutcome> step();
  const WalkState& state() const { return state_; }
  RouteResult result() const;

 private:
  void refresh();
  double step_length(Cell a, Cell b) const;

  const Field& field_;
  Cell origin_;
  WalkParams params_;
  const BonusLayer* bonus_;
  std::uint64_t cap_;
  Rng rng_;
  WalkState state_;
  NeighborSet neighbors_;
  NeighborScores scores_;
  std::array<double, 8> f_{};
};

// Runs a walk to termination. Throws InputError if the origin is off-grid
// or void.
RouteResult walk(const Field& field, Cell origin, const WalkParams& params,
                 const BonusLayer* bonus = nullptr);

// Bonus per cell = cap * (fraction of the top routes visiting it), over the
// best `top_fraction` of routes by coverage (at least one route). cap is half
// the largest road class weight. All routes must be home routes.
BonusLayer experience_bonus(std::span<const RouteResult> routes, const Field& field,
                            double top_fraction = 0.1);

}  // namespace aidroute
