#pragma once

namespace aidroute {

inline constexpr double kEarthRadiusM = 6371008.8;

struct LatLon {
  double lat = 0.0;
  double lon = 0.0;
};

// Great-circle distance in meters.
double haversine_m(LatLon a, LatLon b);
inline double haversine_km(LatLon a, LatLon b) { return haversine_m(a, b) / 1000.0; }

// Meters spanned by one degree of latitude on the sphere.
double meters_per_degree_lat();

// Equirectangular projection about a reference latitude: x east, y north,
// both in meters. Used for raster geometry and planar k-means.
class LocalProjection {
 public:
  explicit LocalProjection(double ref_lat_deg);

  double x_m(double lon) const { return lon * m_per_deg_lon_; }
  double y_m(double lat) const { return lat * m_per_deg_lat_; }
  double lon(double x_m) const { return x_m / m_per_deg_lon_; }
  double lat(double y_m) const { return y_m / m_per_deg_lat_; }
  double m_per_deg_lon() const { return m_per_deg_lon_; }
  double m_per_deg_lat() const { return m_per_deg_lat_; }

 private:
  double m_per_deg_lat_;
  double m_per_deg_lon_;
};

}  // namespace aidroute
