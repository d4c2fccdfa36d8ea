#pragma once

#include <stdexcept>
#include <string>

namespace avgps {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEarthRadiusM = 6371000.0;
inline constexpr double kDegToRad = kPi / 180.0;
inline constexpr double kRadToDeg = 180.0 / kPi;

// Wrap an angle to (-pi, pi].
double wrap_angle(double a);

// Wrap a longitude to (-180, 180].
double wrap_longitude(double lon_deg);

struct DegeneratePair : std::invalid_argument {
  DegeneratePair() : std::invalid_argument("bearing undefined for coincident points") {}
};

struct OutOfFrame : std::domain_error {
  explicit OutOfFrame(const std::string& what) : std::domain_error(what) {}
};

// Geodetic coordinate in decimal degrees. Construction enforces
// lat in [-90, 90] and lon in (-180, 180].
struct GeoPoint {
  double lat_deg = 0.0;
  double lon_deg = 0.0;

  GeoPoint() = default;
  GeoPoint(double lat, double lon);

  // Clamps latitude and wraps longitude instead of throwing.
  static GeoPoint normalized(double lat, double lon);
};

// Haversine distance in meters on the mean-radius sphere.
double great_circle_distance(const GeoPoint& a, const GeoPoint& b);

// Compass bearing from current to target, radians in (-pi, pi].
// 0 = due north, +pi/2 = due east. Throws DegeneratePair when the points
// coincide within 1e-12 degrees.
double target_yaw_from_gps(const GeoPoint& current, const GeoPoint& target);

// Cross-track error: remaining distance times the sine of the wrapped
// heading difference. Meters, signed.
double cross_track_error(double psi_target, double psi, double distance_to_target_m);

// Point reached from start along an initial compass bearing for the given
// distance (great-circle forward problem).
GeoPoint destination_point(const GeoPoint& start, double bearing_rad, double distance_m);

// Equirectangular tangent plane about an origin: x east, y north, meters.
// Valid within 0.5 degrees of the origin in both axes.
class LocalFrame {
 public:
  LocalFrame() : LocalFrame(GeoPoint{}) {}
  explicit LocalFrame(const GeoPoint& origin);

  struct Xy {
    double x = 0.0;
    double y = 0.0;
  };

  Xy to_local(const GeoPoint& p) const;        // throws OutOfFrame beyond 0.5 deg
  GeoPoint to_geo(double x, double y) const;   // inverse of to_local

  const GeoPoint& origin() const { return origin_; }
  double meters_per_deg_lat() const { return m_per_deg_lat_; }
  double meters_per_deg_lon() const { return m_per_deg_lon_; }

 private:
  GeoPoint origin_;
  double m_per_deg_lat_ = 0.0;
  double m_per_deg_lon_ = 0.0;
};

}  // namespace avgps
