#pragma once

#include <optional>
#include <variant>

#include "avgps/gps.hpp"

namespace avgps {

// Position-domain spoofing modes. FixedTarget pins the reported position to
// attacker-chosen coordinates; BiasAngle leaves the position intact and
// biases the computed target bearing; GaussianOffset draws the reported
// position from a normal centered on the true position plus an offset.
struct FixedTarget {
  GeoPoint target;
};
struct BiasAngle {
  double theta = 0.0;  // rad added to the target bearing
};
struct GaussianOffset {
  double mu_lat_deg = 0.0;
  double mu_lon_deg = 0.0;
  double sigma_deg = 0.0;
};
using SpoofMode = std::variant<FixedTarget, BiasAngle, GaussianOffset>;

// What the receiver observes while the attacker jams and after capture.
// Reported dop collapses as soon as jamming suppresses the signal, while
// individual channel locks drop off progressively.
struct DisruptionProfile {
  double jam_hdop_onset = 2.5;           // hdop factor the moment jamming starts
  double jam_hdop_inflation = 3.0;       // hdop factor reached by the end of jamming
  double captured_hdop_inflation = 1.2;  // hdop factor while captured
  int captured_lock = -1;                // -1: lock recovers to the visible count
};

struct SpoofConfig {
  SpoofMode mode = GaussianOffset{};
  double t0 = 0.0;          // attack start, seconds
  double duration = 1.0;    // total attack span including the jamming phase
  std::optional<double> capture_delay;  // seconds; unset means sample U[4, 7]
  double masking_noise_deg = 5e-6;      // stealth noise sigma per axis
  DisruptionProfile profile;

  void validate() const;
};

// Samples the capture delay when the config leaves it open.
SpoofConfig resolve_capture_delay(const SpoofConfig& cfg, CounterRng& rng);

enum class SpoofPhase { Idle, Jamming, Captured, Ended };

struct SpoofState {
  SpoofPhase phase = SpoofPhase::Idle;
  bool attack_flag = false;
  double elapsed = 0.0;  // since t0, zero while idle
};

// Phase at time t. The config must carry a resolved capture delay.
SpoofState spoof_phase(const SpoofConfig& cfg, double t);

// Applies the attack to one fix: identity outside the attack window,
// degraded satellite observables while jamming, replaced position plus
// masking noise while captured.
GpsFix spoof_fix(const GpsFix& true_fix, const SpoofConfig& cfg, const SpoofState& state,
                 CounterRng& rng);

// Target bearing computed from the spoofed position with the attack bias.
double spoofed_target_yaw(const GeoPoint& current_spoofed, const GeoPoint& target, double theta);

}  // namespace avgps
