#include "aidroute/packing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "aidroute/errors.hpp"
#include "aidroute/rng.hpp"

namespace aidroute {

namespace {
constexpr double kEps = 1e-9;
}

Dims oriented(const Dims& d, int orientation) {
  switch (orientation) {
    case 0: return {d.l, d.w, d.h};
    case 1: return {d.l, d.h, d.w};
    case 2: return {d.w, d.l, d.h};
    case 3: return {d.w, d.h, d.l};
    case 4: return {d.h, d.l, d.w};
    case 5: return {d.h, d.w, d.l};
  }
  throw InputError("orientation must be in [0, 6)");
}

void GAConfig::validate() const {
  if (population < 2) throw ConfigError("GA population must be >= 2");
  if (tournament < 1) throw ConfigError("GA tournament size must be >= 1");
  if (crossover_rate < 0.0 || crossover_rate > 1.0 || mutation_rate < 0.0 || mutation_rate > 1.0)
    throw ConfigError("GA rates must lie in [0, 1]");
}

namespace {

bool overlaps(const Placement& a, const Placement& b) {
  return a.x < b.x + b.extent.l - kEps && b.x < a.x + a.extent.l - kEps &&
         a.y < b.y + b.extent.w - kEps && b.y < a.y + a.extent.w - kEps &&
         a.z < b.z + b.extent.h - kEps && b.z < a.z + a.extent.h - kEps;
}

struct Chromosome {
  std::vector<std::size_t> order;
  std::vector<int> orient;  // indexed by box, not by position in order
  double fitness = -1.0;
  std::size_t placed = 0;
};

class Decoder {
 public:
  Decoder(const Dims& bay, std::span<const Box> boxes) : bay_(bay), boxes_(boxes) {
    total_volume_ = 0.0;
    for (const auto& b : boxes_) total_volume_ += b.dims.volume();
  }

  // Places boxes in chromosome order; boxes that fit nowhere are skipped.
  std::vector<Placement> decode(const Chromosome& c) const {
    std::vector<Placement> placed;
    placed.reserve(c.order.size());
    std::array<std::vector<double>, 3> coords;
    for (int axis = 0; axis < 3; ++axis) coords[axis] = candidate_coords(c, axis);
    for (std::size_t box : c.order) {
      const Dims e = oriented(boxes_[box].dims, c.orient[box]);
      if (e.l > bay_.l + kEps || e.w > bay_.w + kEps || e.h > bay_.h + kEps) continue;
      bool done = false;
      // Scan deepest (x) first, then bottom (z), then left (y).
      for (double x : coords[0]) {
        if (x + e.l > bay_.l + kEps) break;
        for (double z : coords[2]) {
          if (z + e.h > bay_.h + kEps) break;
          for (double y : coords[1]) {
            if (y + e.w > bay_.w + kEps) break;
            const Placement p{box, x, y, z, c.orient[box], e};
            if (std::none_of(placed.begin(), placed.end(),
                             [&](const Placement& q) { return overlaps(p, q); })) {
              placed.push_back(p);
              done = true;
              break;
            }
          }
          if (done) break;
        }
        if (done) break;
      }
    }
    return placed;
  }

  void evaluate(Chromosome& c) const {
    const auto placed = decode(c);
    double vol = 0.0;
    for (const auto& p : placed) vol += boxes_[p.box].dims.volume();
    c.placed = placed.size();
    c.fitness = total_volume_ > 0.0 ? vol / total_volume_ : 1.0;
  }

 private:
  // Every packing can be pushed into a normal pattern, where each
  // coordinate is a sum of extents of other boxes along that axis. Those
  // subset sums (below the bay size) are the candidate coordinates.
  std::vector<double> candidate_coords(const Chromosome& c, int axis) const {
    const double limit = axis == 0 ? bay_.l : axis == 1 ? bay_.w : bay_.h;
    std::vector<double> sums{0.0};
    for (std::size_t b = 0; b < boxes_.size(); ++b) {
      const Dims e = oriented(boxes_[b].dims, c.orient[b]);
      const double side = axis == 0 ? e.l : axis == 1 ? e.w : e.h;
      const std::size_t m = sums.size();
      for (std::size_t i = 0; i < m; ++i)
        if (sums[i] + side < limit - kEps) sums.push_back(sums[i] + side);
      std::sort(sums.begin(), sums.end());
      std::size_t keep = 1;
      for (std::size_t i = 1; i < sums.size(); ++i)
        if (sums[i] - sums[keep - 1] > kEps) sums[keep++] = sums[i];
      sums.resize(keep);
    }
    return sums;
  }

  Dims bay_;
  std::span<const Box> boxes_;
  double total_volume_ = 0.0;
};

// Order crossover (OX1) on the permutation.
std::vector<std::size_t> order_crossover(const std::vector<std::size_t>& a,
                                         const std::vector<std::size_t>& b, Rng& rng) {
  const std::size_t n = a.size();
  std::size_t lo = rng.index(n);
  std::size_t hi = rng.index(n);
  if (lo > hi) std::swap(lo, hi);
  std::vector<std::size_t> child(n);
  std::vector<char> used(n, 0);
  for (std::size_t i = lo; i <= hi; ++i) {
    child[i] = a[i];
    used[a[i]] = 1;
  }
  std::size_t pos = (hi + 1) % n;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t gene = b[(hi + 1 + k) % n];
    if (used[gene]) continue;
    child[pos] = gene;
    used[gene] = 1;
    pos = (pos + 1) % n;
  }
  return child;
}

}  // namespace

PackingResult pack_feasible(const Dims& bay, std::span<const Box> boxes, const GAConfig& cfg) {
  cfg.validate();
  if (!(bay.l > 0 && bay.w > 0 && bay.h > 0)) throw InputError("bay dims must be positive");
  if (boxes.empty()) throw InputError("nothing to pack");
  for (const auto& b : boxes)
    if (!(b.dims.l > 0 && b.dims.w > 0 && b.dims.h > 0))
      throw InputError("box '" + b.kind + "' has non-positive dims");

  const std::size_t n = boxes.size();
  const Decoder decoder(bay, boxes);
  Rng rng(cfg.seed);
  PackingResult result;

  auto finish = [&](const Chromosome& best) {
    result.fitness = best.fitness;
    result.feasible = best.placed == n;
    if (result.feasible) result.placements = decoder.decode(best);
    return result;
  };

  auto randomize = [&](Chromosome& c) {
    c.order.resize(n);
    std::iota(c.order.begin(), c.order.end(), std::size_t{0});
    for (std::size_t k = n; k > 1; --k) std::swap(c.order[k - 1], c.order[rng.index(k)]);
    c.orient.resize(n);
    for (auto& o : c.orient) o = static_cast<int>(rng.index(kOrientations));
    decoder.evaluate(c);
    ++result.evaluations;
  };

  std::vector<Chromosome> pop(cfg.population);
  for (std::size_t i = 0; i < pop.size(); ++i) {
    auto& c = pop[i];
    if (i == 0) {
      c.order.resize(n);
      std::iota(c.order.begin(), c.order.end(), std::size_t{0});
      c.orient.assign(n, 0);
      std::stable_sort(c.order.begin(), c.order.end(), [&](std::size_t a, std::size_t b) {
        return boxes[a].dims.volume() > boxes[b].dims.volume();
      });
      decoder.evaluate(c);
      ++result.evaluations;
    } else {
      randomize(c);
    }
  }

  auto best_of = [](const std::vector<Chromosome>& p) {
    return std::max_element(p.begin(), p.end(), [](const Chromosome& a, const Chromosome& b) {
      return a.fitness < b.fitness;
    });
  };
  auto tournament = [&](const std::vector<Chromosome>& p) -> const Chromosome& {
    const Chromosome* best = &p[rng.index(p.size())];
    for (std::size_t t = 1; t < cfg.tournament; ++t) {
      const Chromosome& c = p[rng.index(p.size())];
      if (c.fitness > best->fitness) best = &c;
    }
    return *best;
  };

  auto best = best_of(pop);
  if (best->placed == n) return finish(*best);
  double best_seen = best->fitness;
  std::size_t stalled = 0;

  for (std::size_t gen = 1; gen <= cfg.generations; ++gen) {
    result.generations = gen;
    if (cfg.restart_after > 0 && stalled >= cfg.restart_after) {
      // Converged without a full packing: keep the elite, reseed the rest.
      pop[0] = Chromosome(*best);
      for (std::size_t i = 1; i < pop.size(); ++i) randomize(pop[i]);
      best = best_of(pop);
      if (best->placed == n) return finish(*best);
      stalled = 0;
    }
    std::vector<Chromosome> next;
    next.reserve(pop.size());
    next.push_back(*best);  // elitism
    while (next.size() < pop.size()) {
      const Chromosome& pa = tournament(pop);
      const Chromosome& pb = tournament(pop);
      Chromosome child;
      if (n > 1 && rng.uniform() < cfg.crossover_rate) {
        child.order = order_crossover(pa.order, pb.order, rng);
        child.orient.resize(n);
        for (std::size_t k = 0; k < n; ++k)
          child.orient[k] = rng.uniform() < 0.5 ? pa.orient[k] : pb.orient[k];
      } else {
        child.order = pa.order;
        child.orient = pa.orient;
      }
      if (n > 1 && rng.uniform() < cfg.mutation_rate)
        std::swap(child.order[rng.index(n)], child.order[rng.index(n)]);
      for (auto& o : child.orient)
        if (rng.uniform() < cfg.mutation_rate) o = static_cast<int>(rng.index(kOrientations));
      decoder.evaluate(child);
      ++result.evaluations;
      next.push_back(std::move(child));
      if (next.back().placed == n) return finish(next.back());
    }
    pop = std::move(next);
    best = best_of(pop);
    if (best->fitness > best_seen + kEps) {
      best_seen = best->fitness;
      stalled = 0;
    } else {
      ++stalled;
    }
  }
  return finish(*best);
}

bool placement_valid(const Dims& bay, std::span<const Box> boxes,
                     std::span<const Placement> placements, std::string* why) {
  auto fail = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  if (placements.size() != boxes.size()) return fail("placement count != box count");
  std::vector<int> seen(boxes.size(), 0);
  for (const auto& p : placements) {
    if (p.box >= boxes.size()) return fail("box index out of range");
    if (seen[p.box]++) return fail("box placed twice");
    std::array<double, 3> a{p.extent.l, p.extent.w, p.extent.h};
    std::array<double, 3> b{boxes[p.box].dims.l, boxes[p.box].dims.w, boxes[p.box].dims.h};
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (int k = 0; k < 3; ++k)
      if (std::abs(a[k] - b[k]) > kEps) return fail("extent is not a rotation of the box");
    if (p.x < -kEps || p.y < -kEps || p.z < -kEps || p.x + p.extent.l > bay.l + kEps ||
        p.y + p.extent.w > bay.w + kEps || p.z + p.extent.h > bay.h + kEps)
      return fail("box " + std::to_string(p.box) + " sticks out of the bay");
  }
  for (std::size_t i = 0; i < placements.size(); ++i)
    for (std::size_t j = i + 1; j < placements.size(); ++j)
      if (overlaps(placements[i], placements[j]))
        return fail("boxes " + std::to_string(placements[i].box) + " and " +
                    std::to_string(placements[j].box) + " overlap");
  return true;
}

MedBoxes default_med_boxes() {
  return {Box{"MED1", {14, 7, 5}, 2.0}, Box{"MED2", {5, 8, 5}, 2.0},
          Box{"MED3", {12, 7, 4}, 3.0}};
}

std::map<std::string, Dims> default_drone_crates() {
  return {{"A", {45, 45, 25}}, {"B", {30, 30, 22}}, {"C", {60, 50, 30}},
          {"D", {25, 20, 25}}, {"E", {25, 20, 27}}, {"F", {40, 40, 25}},
          {"G", {32, 32, 17}}, {"H", {65, 75, 41}}};
}

PackagePlan make_plan(const Destination& dest, const MedBoxes& meds) {
  PackagePlan plan{dest.name, dest.daily, 0.0};
  for (int i = 0; i < 3; ++i) {
    if (plan.counts[i] < 0) throw InputError("negative demand for " + dest.name);
    plan.total_weight_lb += plan.counts[i] * meds[i].weight_lb;
  }
  if (plan.counts[0] + plan.counts[1] + plan.counts[2] == 0)
    throw InputError("destination " + dest.name + " has no demand");
  return plan;
}

std::vector<Box> plan_boxes(const PackagePlan& plan, const MedBoxes& meds) {
  std::vector<Box> out;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < plan.counts[i]; ++k) out.push_back(meds[i]);
  return out;
}

std::vector<const PlanRow*> PlanTable::rows_for(const std::string& destination) const {
  std::vector<const PlanRow*> out;
  for (const auto& r : rows)
    if (r.destination == destination) out.push_back(&r);
  return out;
}

const PlanRow* PlanTable::find(const std::string& destination, const std::string& drone) const {
  for (const auto& r : rows)
    if (r.destination == destination && r.drone == drone) return &r;
  return nullptr;
}

PlanTable enumerate_plans(const std::vector<Destination>& dests,
                          const std::vector<DroneSpec>& catalog, const MedBoxes& meds,
                          const RangeModel& model, const GAConfig& ga) {
  model.validate();
  PlanTable table;
  std::uint64_t pair_index = 0;
  for (const auto& dest : dests) {
    const PackagePlan plan = make_plan(dest, meds);
    const auto boxes = plan_boxes(plan, meds);
    std::vector<PlanRow> rows;
    for (const auto& drone : catalog) {
      const std::uint64_t idx = pair_index++;
      if (!drone.carries_cargo() || plan.total_weight_lb > drone.mpc_lb) continue;
      GAConfig cfg = ga;
      cfg.seed = derive_seed(ga.seed, idx);
      auto packing = pack_feasible(*drone.bay, boxes, cfg);
      if (!packing.feasible) continue;
      rows.push_back({dest.name, drone.model, plan, max_reach_km(drone, model, plan.total_weight_lb),
                      0, std::move(packing.placements)});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const PlanRow& a, const PlanRow& b) {
      if (a.distance_km != b.distance_km) return a.distance_km > b.distance_km;
      return a.drone < b.drone;
    });
    if (rows.empty()) table.unservable.push_back(dest.name);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      rows[i].rank = static_cast<int>(i) + 1;
      table.rows.push_back(std::move(rows[i]));
    }
  }
  return table;
}

std::array<long long, 3> fill_by_capacity(const MedCounts& ratio, long long capacity_units) {
  const long long group = static_cast<long long>(ratio[0]) + ratio[1] + ratio[2];
  if (group <= 0 || capacity_units <= 0) return {0, 0, 0};
  const long long g = std::gcd(std::gcd(ratio[0], ratio[1]), ratio[2]);
  const long long groups = capacity_units / (group / g);
  return {groups * (ratio[0] / g), groups * (ratio[1] / g), groups * (ratio[2] / g)};
}

long long supporting_days(const std::array<long long, 3>& stock,
                          const std::array<double, 3>& daily_demand) {
  bool any = false;
  double days = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (!(daily_demand[i] > 0.0)) continue;
    const double d = static_cast<double>(stock[i]) / daily_demand[i];
    days = any ? std::min(days, d) : d;
    any = true;
  }
  return any ? static_cast<long long>(std::floor(days)) : 0;
}

ContainerConfig configure_container(const Dims& container,
                                    const std::vector<std::pair<std::string, int>>& drone_counts,
                                    const std::map<std::string, Dims>& crates,
                                    const MedCounts& ratio, const MedBoxes& meds,
                                    const std::array<double, 3>& daily_demand,
                                    double packing_efficiency) {
  if (!(packing_efficiency > 0.0 && packing_efficiency <= 1.0))
    throw ConfigError("packing efficiency must lie in (0, 1]");
  ContainerConfig cfg;
  double used = 0.0;
  std::array<double, 3> cdims{container.l, container.w, container.h};
  std::sort(cdims.begin(), cdims.end());
  for (const auto& [model, count] : drone_counts) {
    if (count <= 0) continue;
    auto it = crates.find(model);
    if (it == crates.end()) throw ConfigError("no crate dims for drone " + model);
    std::array<double, 3> d{it->second.l, it->second.w, it->second.h};
    std::sort(d.begin(), d.end());
    for (int k = 0; k < 3; ++k)
      if (d[k] > cdims[k]) throw ConfigError("drone crate " + model + " does not fit the container");
    used += count * it->second.volume();
    cfg.drones[model] += count;
  }
  if (used > container.volume())
    throw ConfigError("drone crates overflow the container");
  cfg.remaining_volume_in3 = container.volume() - used;

  const long long g = std::gcd(std::gcd(ratio[0], ratio[1]), ratio[2]);
  double group_volume = 0.0;
  if (g > 0)
    for (int i = 0; i < 3; ++i) group_volume += (ratio[i] / g) * meds[i].dims.volume();
  if (group_volume > 0.0) {
    const auto groups = static_cast<long long>(
        std::floor(packing_efficiency * cfg.remaining_volume_in3 / group_volume));
    for (int i = 0; i < 3; ++i) cfg.meds[i] = groups * (ratio[i] / g);
  }
  cfg.supporting_days = supporting_days(cfg.meds, daily_demand);
  return cfg;
}

}  // namespace aidroute
