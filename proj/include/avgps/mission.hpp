#pragma once

#include <cstddef>
#include <vector>

#include "avgps/geo.hpp"

namespace avgps {

// Ordered waypoint plan. The last waypoint is conventionally the home
// location; with loop set the index wraps instead of completing.
struct Mission {
  GeoPoint home;
  std::vector<GeoPoint> waypoints;
  double acceptance_radius_m = 2.0;
  bool loop = false;

  void validate() const;

  // Home plus (count - 1) points evenly spaced on a circle through home,
  // visited counterclockwise and ending back at home.
  static Mission circular(const GeoPoint& home, double radius_m, int count);
};

struct MissionStatus {
  GeoPoint target;
  std::size_t index = 0;
  bool complete = false;
};

// Advances the active waypoint by at most one when the current position is
// within the acceptance radius of it. Complete (non-loop) once the final
// waypoint is reached.
MissionStatus mission_step(const Mission& mission, const GeoPoint& current,
                           std::size_t active_index);

}  // namespace avgps
