#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "aidroute/fleet.hpp"
#include "aidroute/packing.hpp"

namespace aidroute {

// model,mpc_lb,speed_kmh,flight_time_min,bay_l,bay_w,bay_h,video
// Empty bay fields mean the drone has no cargo bay.
std::vector<DroneSpec> parse_drone_catalog(std::string_view csv);
std::string serialize_drone_catalog(const std::vector<DroneSpec>& catalog);

// kind,l,w,h,weight_lb. MED1..MED3 rows are the medical packages; every other
// kind is the shipping crate of the drone model of that name.
struct PackageCatalog {
  MedBoxes meds = default_med_boxes();
  std::map<std::string, Dims> crates = default_drone_crates();
};
PackageCatalog parse_package_catalog(std::string_view csv);
std::string serialize_package_catalog(const PackageCatalog& catalog);

// name,lat,lon,med1_per_day,med2_per_day,med3_per_day
std::vector<Destination> parse_destinations(std::string_view csv);

}  // namespace aidroute
