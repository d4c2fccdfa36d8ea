#include "avgps/spoof.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace avgps {

void SpoofConfig::validate() const {
  if (!(duration > 0.0)) throw std::invalid_argument("attack duration must be positive");
  if (!(masking_noise_deg >= 0.0)) throw std::invalid_argument("masking noise must be >= 0");
  if (capture_delay && !(*capture_delay >= 0.0))
    throw std::invalid_argument("capture delay must be >= 0");
}

SpoofConfig resolve_capture_delay(const SpoofConfig& cfg, CounterRng& rng) {
  SpoofConfig out = cfg;
  if (!out.capture_delay) out.capture_delay = rng.uniform(4.0, 7.0);
  return out;
}

SpoofState spoof_phase(const SpoofConfig& cfg, double t) {
  if (!cfg.capture_delay) throw std::logic_error("spoof_phase needs a resolved capture delay");
  double delay = std::min(*cfg.capture_delay, cfg.duration);
  SpoofState st;
  if (t < cfg.t0) {
    st.phase = SpoofPhase::Idle;
    return st;
  }
  st.elapsed = t - cfg.t0;
  if (st.elapsed >= cfg.duration) {
    st.phase = SpoofPhase::Ended;
    st.elapsed = cfg.duration;
    return st;
  }
  st.phase = st.elapsed < delay ? SpoofPhase::Jamming : SpoofPhase::Captured;
  st.attack_flag = true;
  return st;
}

GpsFix spoof_fix(const GpsFix& true_fix, const SpoofConfig& cfg, const SpoofState& state,
                 CounterRng& rng) {
  if (state.phase == SpoofPhase::Idle || state.phase == SpoofPhase::Ended) return true_fix;

  GpsFix fix = true_fix;
  if (state.phase == SpoofPhase::Jamming) {
    double delay = std::min(cfg.capture_delay.value_or(0.0), cfg.duration);
    double frac = delay > 0.0 ? std::min(1.0, state.elapsed / delay) : 1.0;
    fix.sat_lock = static_cast<int>(std::lround(true_fix.sat_lock * (1.0 - frac)));
    double infl =
        cfg.profile.jam_hdop_onset + (cfg.profile.jam_hdop_inflation - cfg.profile.jam_hdop_onset) * frac;
    fix.hdop = true_fix.hdop * infl;
    fix.vdop = true_fix.vdop * infl;
    return fix;
  }

  // Captured: the receiver tracks the counterfeit constellation.
  double lat = true_fix.position.lat_deg;
  double lon = true_fix.position.lon_deg;
  if (const auto* fixed = std::get_if<FixedTarget>(&cfg.mode)) {
    lat = fixed->target.lat_deg;
    lon = fixed->target.lon_deg;
  } else if (const auto* gauss = std::get_if<GaussianOffset>(&cfg.mode)) {
    lat = rng.normal(lat + gauss->mu_lat_deg, gauss->sigma_deg);
    lon = rng.normal(lon + gauss->mu_lon_deg, gauss->sigma_deg);
  }
  if (cfg.masking_noise_deg > 0.0) {
    lat += rng.normal(0.0, cfg.masking_noise_deg);
    lon += rng.normal(0.0, cfg.masking_noise_deg);
  }
  fix.position = GeoPoint::normalized(lat, lon);
  fix.sat_lock = cfg.profile.captured_lock >= 0
                     ? std::min(cfg.profile.captured_lock, true_fix.sat_count)
                     : true_fix.sat_count;
  fix.hdop = true_fix.hdop * cfg.profile.captured_hdop_inflation;
  fix.vdop = true_fix.vdop * cfg.profile.captured_hdop_inflation;
  return fix;
}

double spoofed_target_yaw(const GeoPoint& current_spoofed, const GeoPoint& target, double theta) {
  return wrap_angle(target_yaw_from_gps(current_spoofed, target) + theta);
}

}  // namespace avgps
