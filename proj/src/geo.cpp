#include "avgps/geo.hpp"

#include <cmath>

namespace avgps {

double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
  return r <= -kPi ? r + 2.0 * kPi : r;
}

double wrap_longitude(double lon_deg) {
  double r = std::remainder(lon_deg, 360.0);
  return r <= -180.0 ? r + 360.0 : r;
}

GeoPoint::GeoPoint(double lat, double lon) : lat_deg(lat), lon_deg(lon) {
  if (!(lat >= -90.0 && lat <= 90.0))
    throw std::out_of_range("latitude out of [-90, 90]: " + std::to_string(lat));
  if (!(lon > -180.0 && lon <= 180.0))
    throw std::out_of_range("longitude out of (-180, 180]: " + std::to_string(lon));
}

GeoPoint GeoPoint::normalized(double lat, double lon) {
  double clamped = lat < -90.0 ? -90.0 : (lat > 90.0 ? 90.0 : lat);
  return GeoPoint(clamped, wrap_longitude(lon));
}

double great_circle_distance(const GeoPoint& a, const GeoPoint& b) {
  // Haversine: d = 2R asin(sqrt(sin^2(dlat/2) + cos(lat1) cos(lat2) sin^2(dlon/2)))
  double lat1 = a.lat_deg * kDegToRad;
  double lat2 = b.lat_deg * kDegToRad;
  double sdlat = std::sin(0.5 * (lat2 - lat1));
  double sdlon = std::sin(0.5 * (b.lon_deg - a.lon_deg) * kDegToRad);
  double h = sdlat * sdlat + std::cos(lat1) * std::cos(lat2) * sdlon * sdlon;
  h = h > 1.0 ? 1.0 : h;
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

double target_yaw_from_gps(const GeoPoint& current, const GeoPoint& target) {
  if (std::fabs(current.lat_deg - target.lat_deg) < 1e-12 &&
      std::fabs(current.lon_deg - target.lon_deg) < 1e-12)
    throw DegeneratePair();
  double lat_c = current.lat_deg * kDegToRad;
  double lat_t = target.lat_deg * kDegToRad;
  double dlon = (target.lon_deg - current.lon_deg) * kDegToRad;
  double p = std::sin(dlon) * std::cos(lat_t);
  double q = std::cos(lat_c) * std::sin(lat_t) - std::sin(lat_c) * std::cos(lat_t) * std::cos(dlon);
  return wrap_angle(std::atan2(p, q));
}

double cross_track_error(double psi_target, double psi, double distance_to_target_m) {
  return distance_to_target_m * std::sin(wrap_angle(psi_target - psi));
}

GeoPoint destination_point(const GeoPoint& start, double bearing_rad, double distance_m) {
  double lat1 = start.lat_deg * kDegToRad;
  double lon1 = start.lon_deg * kDegToRad;
  double ang = distance_m / kEarthRadiusM;
  double lat2 = std::asin(std::sin(lat1) * std::cos(ang) +
                          std::cos(lat1) * std::sin(ang) * std::cos(bearing_rad));
  double lon2 = lon1 + std::atan2(std::sin(bearing_rad) * std::sin(ang) * std::cos(lat1),
                                  std::cos(ang) - std::sin(lat1) * std::sin(lat2));
  return GeoPoint::normalized(lat2 * kRadToDeg, lon2 * kRadToDeg);
}

LocalFrame::LocalFrame(const GeoPoint& origin)
    : origin_(origin),
      m_per_deg_lat_(kEarthRadiusM * kDegToRad),
      m_per_deg_lon_(kEarthRadiusM * std::cos(origin.lat_deg * kDegToRad) * kDegToRad) {}

LocalFrame::Xy LocalFrame::to_local(const GeoPoint& p) const {
  double dlat = p.lat_deg - origin_.lat_deg;
  double dlon = p.lon_deg - origin_.lon_deg;
  if (std::fabs(dlat) >= 0.5 || std::fabs(dlon) >= 0.5)
    throw OutOfFrame("point beyond 0.5 deg of local frame origin");
  return {dlon * m_per_deg_lon_, dlat * m_per_deg_lat_};
}

GeoPoint LocalFrame::to_geo(double x, double y) const {
  return GeoPoint(origin_.lat_deg + y / m_per_deg_lat_, origin_.lon_deg + x / m_per_deg_lon_);
}

}  // namespace avgps
