#pragma once

#include "avgps/geo.hpp"
#include "avgps/rng.hpp"

namespace avgps {

// The monitored receiver tuple: position, signal quality, and satellite
// visibility at a timestamp.
struct GpsFix {
  GeoPoint position;
  double hdop = 0.0;
  double vdop = 0.0;
  int sat_lock = 0;
  int sat_count = 0;
  double timestamp = 0.0;
};

// Receiver noise model for normal-condition fixes. Dilution of precision is
// log-normal about a median, satellite count uniform, and locked satellites
// lose an occasional dropout. Horizontal jitter scales with hdop.
struct GpsNoiseModel {
  double base_accuracy_m = 0.6;   // 1-sigma position error at hdop = 1
  double hdop_median = 0.9;
  double hdop_sigma = 0.15;       // log-space sigma
  double hdop_floor = 0.5;
  double vdop_median = 1.4;
  double vdop_sigma = 0.15;
  double vdop_floor = 0.7;
  int sat_min = 8;
  int sat_max = 14;
  double lock_dropout_prob = 0.05;

  // Exact fixes: no jitter, dop pinned to the floors, full lock.
  static GpsNoiseModel none();
};

GpsFix synthesize_fix(const GeoPoint& true_position, const GpsNoiseModel& model, double t,
                      CounterRng& rng);

}  // namespace avgps
