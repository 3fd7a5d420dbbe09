#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "aidroute/field.hpp"
#include "aidroute/fleet.hpp"
#include "aidroute/geo.hpp"
#include "aidroute/packing.hpp"

namespace aidroute {

enum class PointTag { destination, road_sample };

struct WeightedPoint {
  LatLon pos;
  double weight = 1.0;
  PointTag tag = PointTag::road_sample;
};

struct KMeansOptions {
  std::size_t max_iter = 100;
  double tol_deg = 1e-6;
  std::size_t restarts = 10;  // independent k-means++ starts; lowest objective wins
};

struct KMeansResult {
  std::vector<LatLon> centroids;
  std::vector<int> labels;
  // Weighted within-cluster sum of squares (projected degrees^2) after each
  // assignment step of the winning run; non-increasing.
  std::vector<double> objective_trace;
  double objective = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

// Weighted Lloyd iteration on equirectangular coordinates (longitude scaled
// by the cosine of the weighted mean latitude). An empty cluster is
// re-seeded at the point farthest from its own centroid.
KMeansResult kmeans(std::span<const WeightedPoint> points, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& opts = {});

// Every Nth road cell center in storage order, N chosen so roughly
// target_count points come back.
std::vector<LatLon> sample_road_points(const Field& field, std::size_t target_count);

// Delivery drone for a group of destinations: among drones with a feasible
// plan for every member, the one with the smallest rank sum (ties by model
// name). Falls back to each destination's rank-1 drone when there is none.
struct DroneChoice {
  std::string drone;  // empty when no common drone exists
  std::map<std::string, std::string> per_destination;
  bool common = false;
};
DroneChoice choose_delivery_drone(const std::vector<std::string>& destinations,
                                  const PlanTable& table);

struct ClusterPlan {
  LatLon centroid;
  std::vector<std::string> destinations;
  DroneChoice delivery;
  std::map<std::string, int> drones;  // filled by assign_drones
  std::vector<std::string> warnings;
};

struct BasePlan {
  std::size_t k = 0;
  std::vector<ClusterPlan> clusters;
  std::map<std::string, int> partition;  // destination -> cluster index
  double initial_weight = 0.0;
  double oversample_weight = 0.0;
  bool feasible = false;
};

// True when every destination of the cluster lies within the reach of its
// delivery drone carrying that destination's daily plan.
bool cluster_reachable(const ClusterPlan& cluster, const std::vector<Destination>& dests,
                       const PlanTable& table);

struct OversampleOptions {
  double weight_step = 1.25;
  double cap_factor = 1e6;
  std::uint64_t seed = 7;
  KMeansOptions kmeans;
};

// Destinations start with a weight that balances the total road weight
// (each road sample weighs 1) and grow geometrically until every cluster is
// reachable. Returns feasible = false once the weight passes the cap.
BasePlan oversample_until_feasible(const std::vector<Destination>& dests,
                                   std::span<const LatLon> road_points, const PlanTable& table,
                                   std::size_t k, const OversampleOptions& opts = {});

struct KAttempt {
  std::size_t k = 0;
  bool feasible = false;
  double weight = 0.0;
};

struct SelectKResult {
  BasePlan plan;
  std::vector<KAttempt> attempts;
};

// Smallest feasible k in 1..k_max. Throws PlanningError if none.
SelectKResult select_k(const std::vector<Destination>& dests, std::span<const LatLon> road_points,
                       const PlanTable& table, std::size_t k_max = 3,
                       const OversampleOptions& opts = {});

// haversine(a, b) <= max_reach_km(spec, load).
bool transfer_feasible(LatLon a, LatLon b, const DroneSpec& spec, const RangeModel& model,
                       double load_lb);

struct FleetPolicy {
  int delivery_multiplier = 2;      // spares for every delivery drone
  std::string recon_model = "B";    // filming drone kept at every base
  int recon_count = 2;
  std::string relay_model = "H";    // communication drones per base
  int relay_count = 2;
};

// Fills ClusterPlan::drones for every non-empty cluster.
void assign_drones(BasePlan& plan, const PlanTable& table, const FleetPolicy& policy = {});

}  // namespace aidroute
