#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "avgps/control.hpp"
#include "avgps/ekf.hpp"
#include "avgps/gps.hpp"
#include "avgps/mission.hpp"
#include "avgps/spoof.hpp"
#include "avgps/vehicle.hpp"

namespace avgps {

struct DivergedSimulation : std::runtime_error {
  explicit DivergedSimulation(std::uint64_t tick)
      : std::runtime_error("simulation diverged at tick " + std::to_string(tick)), tick(tick) {}
  std::uint64_t tick;
};

// Additive noise of the inertial-side sensors feeding the filter.
struct SensorNoise {
  double gyro_std = 0.002;     // rad/s
  double compass_std = 0.002;  // rad
  double odom_std = 0.01;      // m/s
};

struct Scenario {
  VehicleParams vehicle = VehicleParams::testbed();
  SignConvention convention = SignConvention::StandardStable;
  Mission mission;
  SteeringConfig steering;
  SpeedConfig speed;
  double v_target = 0.5;  // m/s commanded cruise speed
  EkfConfig ekf;
  GpsNoiseModel gps_noise;
  SensorNoise sensors;
  std::optional<SpoofConfig> spoof;
  std::uint64_t seed = 1;
  double dt_control = 0.01;      // s
  double gps_rate_hz = 1.0;
  double feature_rate_hz = 1.0;
  double duration_s = 120.0;
  bool hold_on_failsafe = true;  // zero the commands once the failsafe trips

  void validate() const;
};

// One labeled sample of the behavior-model features.
struct FeatureRow {
  double timestamp = 0.0;
  double lat = 0.0;
  double lon = 0.0;
  double hdop = 0.0;
  double vdop = 0.0;
  int sat_lock = 0;
  int sat_count = 0;
  double e = 0.0;      // cross-track error, m
  double delta = 0.0;  // steering, rad
  double x = 0.0;      // estimated east position, m
  double y = 0.0;      // estimated north position, m
  double psi = 0.0;    // heading, rad (math convention)
  double vx = 0.0;     // m/s
  double vy = 0.0;     // m/s
  double r = 0.0;      // rad/s
  int label = 0;       // 1 while the attack is active
};

struct TruthSample {
  double t = 0.0;
  VehicleState state;
  Vec4 estimate{};
  SpoofPhase phase = SpoofPhase::Idle;
  bool failsafe = false;
};

struct SimLog {
  std::vector<FeatureRow> rows;
  std::vector<TruthSample> truth;
  std::optional<double> first_failsafe_time;
  std::vector<double> failsafe_alarm_times;  // times where the alarm turned on
  bool mission_complete = false;
  double completion_time = 0.0;
  std::optional<double> attack_start;
  std::optional<double> attack_end;
  std::optional<double> capture_delay;
};

// Runs the closed navigation -> control -> dynamics -> sensing -> estimation
// loop, with the optional spoofer sitting between the receiver and the
// navigator. Deterministic for a fixed scenario.
SimLog run(const Scenario& scenario);

struct AttackSummary {
  double max_abs_e_attack = 0.0;
  double max_abs_e_normal = 0.0;
  double p999_abs_e_normal = 0.0;
  double max_speed_cmd = 0.0;
  double psi_variance_attack = 0.0;
  double psi_variance_normal = 0.0;
  bool excess_cross_track = false;  // attack e beyond the normal 99.9th percentile
  bool heading_stalled = false;     // attack psi variance under 10% of normal
};

// Deviation statistics of an attack log against its own normal-labeled rows.
AttackSummary attack_trajectory_check(const SimLog& log);

}  // namespace avgps
