#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "aidroute/fleet.hpp"
#include "aidroute/geo.hpp"

namespace aidroute {

struct Box {
  std::string kind;  // MED1 | MED2 | MED3 | drone model
  Dims dims;
  double weight_lb = 0.0;
};

// The six axis-aligned rotations; orientation o maps (l, w, h) onto the
// bay's (x, y, z) extents.
inline constexpr int kOrientations = 6;
Dims oriented(const Dims& d, int orientation);

struct Placement {
  std::size_t box = 0;  // index into the input box list
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  int orientation = 0;
  Dims extent;  // box dims after rotation
};

struct PackingResult {
  bool feasible = false;
  std::vector<Placement> placements;  // complete witness when feasible
  double fitness = 0.0;               // packed volume / total box volume
  std::size_t generations = 0;        // generations run (0 = solved by the initial population)
  std::size_t evaluations = 0;
};

struct GAConfig {
  std::size_t population = 50;
  std::size_t generations = 200;
  double crossover_rate = 0.9;
  double mutation_rate = 0.1;
  std::size_t tournament = 3;
  // Reseed all but the elite after this many generations without a better
  // fitness; 0 disables restarts.
  std::size_t restart_after = 25;
  std::uint64_t seed = 1;
  void validate() const;
};

// Genetic search for a placement of every box inside the bay. A chromosome is
// a box order plus one orientation gene per box; it is decoded by placing
// boxes in order at the first free point, scanning depth, then height, then
// width over normal-pattern coordinates. Stops on the first complete packing;
// infeasible means the full budget ran out.
PackingResult pack_feasible(const Dims& bay, std::span<const Box> boxes, const GAConfig& cfg);

// Geometric check that knows nothing about the GA: every box placed exactly
// once, extents match a rotation of its dims, inside the bay, no two boxes
// overlap with positive volume.
bool placement_valid(const Dims& bay, std::span<const Box> boxes,
                     std::span<const Placement> placements, std::string* why = nullptr);

// MED1, MED2, MED3 in that order.
using MedBoxes = std::array<Box, 3>;
using MedCounts = std::array<int, 3>;
MedBoxes default_med_boxes();
// Shipping crate dims per drone model (inches).
std::map<std::string, Dims> default_drone_crates();

struct Destination {
  std::string name;
  LatLon pos;
  MedCounts daily{};  // packages of MED1..3 needed per day
};

// Everything a destination needs in one day, carried on one flight.
struct PackagePlan {
  std::string destination;
  MedCounts counts{};
  double total_weight_lb = 0.0;
};
PackagePlan make_plan(const Destination& dest, const MedBoxes& meds);
std::vector<Box> plan_boxes(const PackagePlan& plan, const MedBoxes& meds);

struct PlanRow {
  std::string destination;
  std::string drone;
  PackagePlan plan;
  double distance_km = 0.0;  // max reach with this plan on board
  int rank = 0;              // 1 = longest reach for this destination
  std::vector<Placement> witness;
};

struct PlanTable {
  std::vector<PlanRow> rows;  // grouped by destination (input order), rank ascending
  std::vector<std::string> unservable;

  std::vector<const PlanRow*> rows_for(const std::string& destination) const;
  const PlanRow* find(const std::string& destination, const std::string& drone) const;
};

// Tries every (destination, drone) pair: the plan must weigh no more than the
// drone's safe payload and pack into its bay. Each GA run is seeded from
// (ga.seed, pair index).
PlanTable enumerate_plans(const std::vector<Destination>& dests,
                          const std::vector<DroneSpec>& catalog, const MedBoxes& meds,
                          const RangeModel& model, const GAConfig& ga);

struct ContainerConfig {
  std::map<std::string, int> drones;
  std::array<long long, 3> meds{};
  long long supporting_days = 0;
  double remaining_volume_in3 = 0.0;
};

// Stock for `capacity_units` package slots in proportion `ratio` (whole
// ratio groups only).
std::array<long long, 3> fill_by_capacity(const MedCounts& ratio, long long capacity_units);

// floor(min over meds with demand > 0 of stock / demand); 0 if no demand.
long long supporting_days(const std::array<long long, 3>& stock,
                          const std::array<double, 3>& daily_demand);

// Loads the drone crates, then fills the remaining volume (scaled by
// packing_efficiency) with whole groups of meds in proportion `ratio`.
// Throws ConfigError when the crates alone do not fit.
ContainerConfig configure_container(const Dims& container,
                                    const std::vector<std::pair<std::string, int>>& drone_counts,
                                    const std::map<std::string, Dims>& crates,
                                    const MedCounts& ratio, const MedBoxes& meds,
                                    const std::array<double, 3>& daily_demand,
                                    double packing_efficiency = 1.0);

// ISO 20 ft dry container interior, inches.
inline constexpr Dims kIso20ftInterior{232.2, 92.6, 94.2};

}  // namespace aidroute
