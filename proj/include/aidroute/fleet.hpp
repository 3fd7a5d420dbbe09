#pragma once

#include <optional>
#include <string>
#include <vector>

namespace aidroute {

// Axis-aligned box extents in inches.
struct Dims {
  double l = 0.0;
  double w = 0.0;
  double h = 0.0;
  double volume() const { return l * w * h; }
  bool operator==(const Dims&) const = default;
};

struct DroneSpec {
  std::string model;
  double mpc_lb = 0.0;           // safe max payload
  double speed_kmh = 0.0;        // constant cruise speed
  double flight_time_min = 0.0;  // endurance with no cargo
  std::optional<Dims> bay;       // cargo bay interior, absent for non-cargo drones
  bool video = false;

  bool carries_cargo() const { return bay.has_value() && mpc_lb > 0.0; }
};

// Flight time falls linearly with load and reaches zero at the drivable
// capacity MDC = k * MPC.
struct RangeModel {
  double k = 1.3;
  void validate() const;  // 1 < k <= 1.3
};

// Minutes of flight left when carrying load_lb; T * (1 - l / (k * MPC)).
// Throws RangeError unless 0 <= load_lb < k * MPC.
double flight_time_under_load(const DroneSpec& spec, const RangeModel& model, double load_lb);

// One-way reach (km) of a trip flown out loaded and back empty:
//   D = (l - kM) / (l - 2kM) * V * T / 30.
// Equals V*T/60 at l = 0.
double max_reach_km(const DroneSpec& spec, const RangeModel& model, double load_lb);

// Unloaded path-length budget in meters, 1000 * V * T / 60.
double mfd_m(const DroneSpec& spec);

// Built-in catalog (models A-H). Values reproduce the reference delivery
// distances for B (8 lb, 79 km/h, 40 min), C (14 lb, 64 km/h, 35 min) and
// F (22 lb, 79 km/h, 24 min).
std::vector<DroneSpec> default_drone_catalog();

const DroneSpec* find_drone(const std::vector<DroneSpec>& catalog, const std::string& model);

}  // namespace aidroute
