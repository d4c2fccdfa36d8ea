#include "avgps/gps.hpp"

#include <algorithm>
#include <cmath>

namespace avgps {

GpsNoiseModel GpsNoiseModel::none() {
  GpsNoiseModel m;
  m.base_accuracy_m = 0.0;
  m.hdop_sigma = 0.0;
  m.hdop_median = m.hdop_floor;
  m.vdop_sigma = 0.0;
  m.vdop_median = m.vdop_floor;
  m.lock_dropout_prob = 0.0;
  return m;
}

GpsFix synthesize_fix(const GeoPoint& true_position, const GpsNoiseModel& model, double t,
                      CounterRng& rng) {
  GpsFix fix;
  fix.timestamp = t;
  fix.hdop = std::max(model.hdop_floor, model.hdop_median * std::exp(model.hdop_sigma * rng.normal()));
  fix.vdop = std::max(model.vdop_floor, model.vdop_median * std::exp(model.vdop_sigma * rng.normal()));

  double sigma_m = fix.hdop * model.base_accuracy_m;
  double north_m = rng.normal(0.0, sigma_m);
  double east_m = rng.normal(0.0, sigma_m);
  double m_per_deg_lat = kEarthRadiusM * kDegToRad;
  double m_per_deg_lon = m_per_deg_lat * std::cos(true_position.lat_deg * kDegToRad);
  fix.position = GeoPoint::normalized(true_position.lat_deg + north_m / m_per_deg_lat,
                                      true_position.lon_deg + east_m / m_per_deg_lon);

  fix.sat_count = rng.uniform_int(model.sat_min, model.sat_max);
  int dropouts = rng.binomial(fix.sat_count, model.lock_dropout_prob);
  fix.sat_lock = std::max(0, fix.sat_count - dropouts);
  return fix;
}

}  // namespace avgps
