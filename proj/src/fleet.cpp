#include "aidroute/fleet.hpp"

#include <algorithm>
#include <string>

#include "aidroute/errors.hpp"

namespace aidroute {

void RangeModel::validate() const {
  if (!(k > 1.0 && k <= 1.3))
    throw ConfigError("range coefficient k must satisfy 1 < k <= 1.3, got " + std::to_string(k));
}

namespace {

double checked_mdc(const DroneSpec& spec, const RangeModel& model, double load_lb) {
  model.validate();
  if (!(spec.mpc_lb > 0.0)) throw RangeError("drone " + spec.model + " carries no payload");
  const double mdc = model.k * spec.mpc_lb;
  if (!(load_lb >= 0.0) || !(load_lb < mdc))
    throw RangeError("load " + std::to_string(load_lb) + " lb outside [0, MDC=" +
                     std::to_string(mdc) + ") for drone " + spec.model);
  return mdc;
}

}  // namespace

double flight_time_under_load(const DroneSpec& spec, const RangeModel& model, double load_lb) {
  const double mdc = checked_mdc(spec, model, load_lb);
  return spec.flight_time_min * (1.0 - load_lb / mdc);
}

double max_reach_km(const DroneSpec& spec, const RangeModel& model, double load_lb) {
  const double mdc = checked_mdc(spec, model, load_lb);
  return (load_lb - mdc) / (load_lb - 2.0 * mdc) * spec.speed_kmh * spec.flight_time_min / 30.0;
}

double mfd_m(const DroneSpec& spec) {
  return 1000.0 * spec.speed_kmh * spec.flight_time_min / 60.0;
}

std::vector<DroneSpec> default_drone_catalog() {
  const Dims bay1{8, 10, 14};
  const Dims bay2{24, 20, 20};
  return {
      {"A", 3.5, 40, 35, bay1, true},
      {"B", 8, 79, 40, bay1, true},
      {"C", 14, 64, 35, bay2, true},
      {"D", 11, 60, 18, bay1, true},
      {"E", 15, 60, 15, bay2, true},
      {"F", 22, 79, 24, bay2, false},
      {"G", 20, 64, 16, bay2, true},
      {"H", 0, 0, 0, std::nullopt, false},
  };
}

const DroneSpec* find_drone(const std::vector<DroneSpec>& catalog, const std::string& model) {
  auto it = std::find_if(catalog.begin(), catalog.end(),
                         [&](const DroneSpec& d) { return d.model == model; });
  return it == catalog.end() ? nullptr : &*it;
}

}  // namespace aidroute
