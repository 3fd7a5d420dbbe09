#include "aidroute/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace aidroute {

namespace {
constexpr double kDeg = std::numbers::pi / 180.0;
}

double haversine_m(LatLon a, LatLon b) {
  const double phi1 = a.lat * kDeg;
  const double phi2 = b.lat * kDeg;
  const double dphi = (b.lat - a.lat) * kDeg;
  const double dlambda = (b.lon - a.lon) * kDeg;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

double meters_per_degree_lat() { return kEarthRadiusM * kDeg; }

LocalProjection::LocalProjection(double ref_lat_deg)
    : m_per_deg_lat_(meters_per_degree_lat()),
      m_per_deg_lon_(meters_per_degree_lat() * std::cos(ref_lat_deg * kDeg)) {}

}  // namespace aidroute
