#include "aidroute/siting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "aidroute/errors.hpp"
#include "aidroute/rng.hpp"

namespace aidroute {

namespace {

struct Xy {
  double x = 0.0;
  double y = 0.0;
};

double sq_dist(Xy a, Xy b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

struct Projected {
  std::vector<Xy> xy;
  std::vector<double> w;
  double lon_scale = 1.0;
};

Projected project(std::span<const WeightedPoint> points) {
  Projected p;
  double wsum = 0.0;
  double lat = 0.0;
  for (const auto& pt : points) {
    wsum += pt.weight;
    lat += pt.weight * pt.pos.lat;
  }
  p.lon_scale = std::cos(lat / wsum * std::numbers::pi / 180.0);
  for (const auto& pt : points) {
    p.xy.push_back({pt.pos.lon * p.lon_scale, pt.pos.lat});
    p.w.push_back(pt.weight);
  }
  return p;
}

std::size_t weighted_pick(const std::vector<double>& mass, Rng& rng) {
  double total = 0.0;
  for (double m : mass) total += m;
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    if (mass[i] <= 0.0) continue;
    if (u < mass[i]) return i;
    u -= mass[i];
  }
  for (std::size_t i = mass.size(); i-- > 0;)
    if (mass[i] > 0.0) return i;
  return 0;
}

struct Run {
  std::vector<Xy> centroids;
  std::vector<int> labels;
  std::vector<double> trace;
  double objective = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

double assign(const Projected& p, const std::vector<Xy>& c, std::vector<int>& labels) {
  double obj = 0.0;
  for (std::size_t i = 0; i < p.xy.size(); ++i) {
    int best = 0;
    double bd = sq_dist(p.xy[i], c[0]);
    for (std::size_t j = 1; j < c.size(); ++j) {
      const double d = sq_dist(p.xy[i], c[j]);
      if (d < bd) {
        bd = d;
        best = static_cast<int>(j);
      }
    }
    labels[i] = best;
    obj += p.w[i] * bd;
  }
  return obj;
}

Run lloyd(const Projected& p, std::size_t k, Rng& rng, const KMeansOptions& opts) {
  const std::size_t n = p.xy.size();
  Run run;
  // Weighted k-means++ seeding.
  run.centroids.push_back(p.xy[weighted_pick(p.w, rng)]);
  std::vector<double> mass(n);
  while (run.centroids.size() < k) {
    for (std::size_t i = 0; i < n; ++i) {
      double d = std::numeric_limits<double>::infinity();
      for (const auto& c : run.centroids) d = std::min(d, sq_dist(p.xy[i], c));
      mass[i] = p.w[i] * d;
    }
    run.centroids.push_back(p.xy[weighted_pick(mass, rng)]);
  }

  run.labels.assign(n, -1);
  std::vector<int> prev;
  for (std::size_t it = 0; it < opts.max_iter; ++it) {
    run.iterations = it + 1;
    prev = run.labels;
    double obj = assign(p, run.centroids, run.labels);

    std::vector<std::size_t> count(k, 0);
    for (int l : run.labels) ++count[static_cast<std::size_t>(l)];
    for (std::size_t j = 0; j < k; ++j) {
      if (count[j] != 0) continue;
      std::size_t far = n;
      double fd = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto l = static_cast<std::size_t>(run.labels[i]);
        if (count[l] < 2) continue;
        const double d = sq_dist(p.xy[i], run.centroids[l]);
        if (d > fd) {
          fd = d;
          far = i;
        }
      }
      if (far == n) break;
      obj -= p.w[far] * fd;
      --count[static_cast<std::size_t>(run.labels[far])];
      run.labels[far] = static_cast<int>(j);
      run.centroids[j] = p.xy[far];
      ++count[j];
    }
    run.trace.push_back(obj);
    if (run.labels == prev) {
      run.converged = true;
      break;
    }

    std::vector<Xy> sum(k);
    std::vector<double> wsum(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto l = static_cast<std::size_t>(run.labels[i]);
      sum[l].x += p.w[i] * p.xy[i].x;
      sum[l].y += p.w[i] * p.xy[i].y;
      wsum[l] += p.w[i];
    }
    double shift = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (wsum[j] <= 0.0) continue;
      const Xy next{sum[j].x / wsum[j], sum[j].y / wsum[j]};
      shift = std::max(shift, std::sqrt(sq_dist(next, run.centroids[j])));
      run.centroids[j] = next;
    }
    if (shift < opts.tol_deg) {
      run.trace.push_back(assign(p, run.centroids, run.labels));
      run.converged = true;
      break;
    }
  }
  run.objective = run.trace.back();
  return run;
}

}  // namespace

KMeansResult kmeans(std::span<const WeightedPoint> points, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& opts) {
  if (k == 0) throw InputError("k must be >= 1");
  std::set<std::pair<double, double>> distinct;
  for (const auto& p : points) {
    if (!(p.weight > 0.0)) throw InputError("k-means weights must be positive");
    distinct.insert({p.pos.lat, p.pos.lon});
  }
  if (k > distinct.size())
    throw InputError("k = " + std::to_string(k) + " exceeds the " +
                     std::to_string(distinct.size()) + " distinct points");

  const Projected proj = project(points);
  Run best;
  bool have = false;
  const std::size_t restarts = std::max<std::size_t>(1, opts.restarts);
  for (std::size_t r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(seed, r));
    Run run = lloyd(proj, k, rng, opts);
    if (!have || run.objective < best.objective) {
      best = std::move(run);
      have = true;
    }
  }

  KMeansResult out;
  for (const auto& c : best.centroids) out.centroids.push_back({c.y, c.x / proj.lon_scale});
  out.labels = std::move(best.labels);
  out.objective_trace = std::move(best.trace);
  out.objective = best.objective;
  out.iterations = best.iterations;
  out.converged = best.converged;
  return out;
}

std::vector<LatLon> sample_road_points(const Field& field, std::size_t target_count) {
  std::vector<LatLon> out;
  const std::size_t roads = field.road_cell_count();
  if (roads == 0 || target_count == 0) return out;
  const std::size_t stride = std::max<std::size_t>(1, roads / target_count);
  std::size_t seen = 0;
  const auto imp = field.importance_layer();
  for (std::size_t i = 0; i < imp.size(); ++i) {
    if (imp[i] <= 0.0) continue;
    if (seen++ % stride == 0) out.push_back(cell_to_latlon(field.meta(), field.meta().cell_at(i)));
  }
  return out;
}

DroneChoice choose_delivery_drone(const std::vector<std::string>& destinations,
                                  const PlanTable& table) {
  DroneChoice choice;
  if (destinations.empty()) return choice;
  std::map<std::string, int> rank_sum;
  std::map<std::string, std::size_t> served;
  for (const auto& d : destinations)
    for (const PlanRow* row : table.rows_for(d)) {
      rank_sum[row->drone] += row->rank;
      ++served[row->drone];
    }
  int best = std::numeric_limits<int>::max();
  for (const auto& [drone, sum] : rank_sum) {
    if (served[drone] != destinations.size()) continue;
    if (sum < best) {
      best = sum;
      choice.drone = drone;
    }
  }
  choice.common = !choice.drone.empty();
  for (const auto& d : destinations) {
    if (choice.common) {
      choice.per_destination[d] = choice.drone;
    } else {
      const auto rows = table.rows_for(d);
      if (!rows.empty()) choice.per_destination[d] = rows.front()->drone;
    }
  }
  return choice;
}

bool cluster_reachable(const ClusterPlan& cluster, const std::vector<Destination>& dests,
                       const PlanTable& table) {
  for (const auto& name : cluster.destinations) {
    auto it = cluster.delivery.per_destination.find(name);
    if (it == cluster.delivery.per_destination.end()) return false;
    const PlanRow* row = table.find(name, it->second);
    auto dest = std::find_if(dests.begin(), dests.end(),
                             [&](const Destination& d) { return d.name == name; });
    if (!row || dest == dests.end()) return false;
    if (haversine_km(cluster.centroid, dest->pos) > row->distance_km) return false;
  }
  return true;
}

BasePlan oversample_until_feasible(const std::vector<Destination>& dests,
                                   std::span<const LatLon> road_points, const PlanTable& table,
                                   std::size_t k, const OversampleOptions& opts) {
  if (dests.empty()) throw InputError("no destinations to site");
  if (!(opts.weight_step > 1.0)) throw ConfigError("oversampling weight step must exceed 1");

  std::vector<WeightedPoint> points;
  for (const auto& d : dests) points.push_back({d.pos, 1.0, PointTag::destination});
  for (const auto& r : road_points) points.push_back({r, 1.0, PointTag::road_sample});

  const double initial =
      road_points.empty() ? 1.0
                          : static_cast<double>(road_points.size()) / static_cast<double>(dests.size());
  BasePlan plan;
  plan.k = k;
  plan.initial_weight = initial;
  for (double w = initial; w <= opts.cap_factor * initial; w *= opts.weight_step) {
    for (std::size_t i = 0; i < dests.size(); ++i) points[i].weight = w;
    const auto km = kmeans(points, k, opts.seed, opts.kmeans);

    std::vector<ClusterPlan> clusters(k);
    std::map<std::string, int> partition;
    for (std::size_t j = 0; j < k; ++j) clusters[j].centroid = km.centroids[j];
    for (std::size_t i = 0; i < dests.size(); ++i) {
      clusters[static_cast<std::size_t>(km.labels[i])].destinations.push_back(dests[i].name);
      partition[dests[i].name] = km.labels[i];
    }
    bool ok = true;
    for (auto& c : clusters) {
      c.delivery = choose_delivery_drone(c.destinations, table);
      ok = ok && cluster_reachable(c, dests, table);
    }
    plan.clusters = std::move(clusters);
    plan.partition = std::move(partition);
    plan.oversample_weight = w;
    if (ok) {
      plan.feasible = true;
      return plan;
    }
  }
  plan.feasible = false;
  return plan;
}

SelectKResult select_k(const std::vector<Destination>& dests, std::span<const LatLon> road_points,
                       const PlanTable& table, std::size_t k_max, const OversampleOptions& opts) {
  SelectKResult result;
  std::set<std::pair<double, double>> distinct;
  for (const auto& d : dests) distinct.insert({d.pos.lat, d.pos.lon});
  for (const auto& r : road_points) distinct.insert({r.lat, r.lon});
  for (std::size_t k = 1; k <= k_max && k <= distinct.size(); ++k) {
    BasePlan plan = oversample_until_feasible(dests, road_points, table, k, opts);
    result.attempts.push_back({k, plan.feasible, plan.oversample_weight});
    if (plan.feasible) {
      result.plan = std::move(plan);
      return result;
    }
  }
  throw PlanningError("no base layout with k <= " + std::to_string(k_max) +
                      " keeps every destination within drone reach");
}

bool transfer_feasible(LatLon a, LatLon b, const DroneSpec& spec, const RangeModel& model,
                       double load_lb) {
  return haversine_km(a, b) <= max_reach_km(spec, model, load_lb);
}

void assign_drones(BasePlan& plan, const PlanTable& table, const FleetPolicy& policy) {
  for (auto& c : plan.clusters) {
    c.drones.clear();
    c.warnings.clear();
    if (c.destinations.empty()) continue;
    c.delivery = choose_delivery_drone(c.destinations, table);
    if (!c.delivery.common)
      c.warnings.push_back("no drone serves every destination of this base; using each "
                           "destination's best drone");
    std::set<std::string> models;
    for (const auto& [dest, drone] : c.delivery.per_destination) models.insert(drone);
    for (const auto& m : models) c.drones[m] += policy.delivery_multiplier;
    if (!policy.recon_model.empty() && policy.recon_count > 0)
      c.drones[policy.recon_model] += policy.recon_count;
    if (!policy.relay_model.empty() && policy.relay_count > 0)
      c.drones[policy.relay_model] += policy.relay_count;
  }
}

}  // namespace aidroute
