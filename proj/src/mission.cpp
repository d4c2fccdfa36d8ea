#include "avgps/mission.hpp"

#include <cmath>
#include <stdexcept>

namespace avgps {

void Mission::validate() const {
  if (waypoints.empty()) throw std::invalid_argument("mission needs at least one waypoint");
  if (!(acceptance_radius_m > 0.0))
    throw std::invalid_argument("acceptance radius must be positive");
}

Mission Mission::circular(const GeoPoint& home, double radius_m, int count) {
  if (count < 2) throw std::invalid_argument("circular mission needs at least two waypoints");
  Mission m;
  m.home = home;
  // Center the circle so home sits on it; walk the vertices from home.
  GeoPoint center = destination_point(home, 0.0, radius_m);
  for (int k = 1; k < count; ++k) {
    double ang = kPi + 2.0 * kPi * k / count;  // home is at bearing pi from center
    m.waypoints.push_back(destination_point(center, ang, radius_m));
  }
  m.waypoints.push_back(home);
  return m;
}

MissionStatus mission_step(const Mission& mission, const GeoPoint& current,
                           std::size_t active_index) {
  if (active_index >= mission.waypoints.size())
    throw std::out_of_range("active waypoint index beyond mission");
  MissionStatus st;
  st.index = active_index;
  st.target = mission.waypoints[active_index];
  if (great_circle_distance(current, st.target) <= mission.acceptance_radius_m) {
    if (st.index + 1 == mission.waypoints.size()) {
      if (mission.loop) {
        st.index = 0;
      } else {
        st.complete = true;
      }
    } else {
      ++st.index;
    }
    if (!st.complete) st.target = mission.waypoints[st.index];
  }
  return st;
}

}  // namespace avgps
