#include "avgps/sim.hpp"

#include <algorithm>
#include <cmath>

namespace avgps {

namespace {

// Geodetic bearing <-> math yaw. The map is its own inverse.
double geo_from_math(double psi_math) { return wrap_angle(kPi / 2.0 - psi_math); }
double math_from_geo(double psi_geo) { return wrap_angle(kPi / 2.0 - psi_geo); }

long ticks_per(double rate_hz, double dt) {
  double raw = 1.0 / (rate_hz * dt);
  long t = std::lround(raw);
  if (t < 1 || std::fabs(raw - t) > 1e-9)
    throw std::invalid_argument("sample rate must divide the control rate");
  return t;
}

double variance(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : xs) mean += v;
  mean /= xs.size();
  double acc = 0.0;
  for (double v : xs) acc += (v - mean) * (v - mean);
  return acc / xs.size();
}

}  // namespace

void Scenario::validate() const {
  vehicle.validate();
  mission.validate();
  if (!(duration_s > 0.0)) throw std::invalid_argument("duration must be positive");
  if (!(dt_control > 0.0 && dt_control <= 0.1))
    throw std::invalid_argument("control step must be in (0, 0.1]");
  ticks_per(gps_rate_hz, dt_control);
  ticks_per(feature_rate_hz, dt_control);
  if (spoof) spoof->validate();
}

SimLog run(const Scenario& scenario) {
  scenario.validate();
  SimLog log;

  CounterRng gps_rng(scenario.seed, rng_stream::kGpsNoise);
  CounterRng spoof_rng(scenario.seed, rng_stream::kSpoof);
  CounterRng delay_rng(scenario.seed, rng_stream::kCaptureDelay);
  CounterRng sensor_rng(scenario.seed, rng_stream::kSensors);

  std::optional<SpoofConfig> spoof;
  if (scenario.spoof) {
    spoof = resolve_capture_delay(*scenario.spoof, delay_rng);
    log.attack_start = spoof->t0;
    log.attack_end = spoof->t0 + spoof->duration;
    log.capture_delay = spoof->capture_delay;
  }

  const LocalFrame frame(scenario.mission.home);
  const long gps_every = ticks_per(scenario.gps_rate_hz, scenario.dt_control);
  const long feature_every = ticks_per(scenario.feature_rate_hz, scenario.dt_control);
  // Rows are sampled mid-interval so they never alias the instant of a
  // navigation update.
  const long feature_phase = feature_every / 2;
  const std::uint64_t total_ticks =
      static_cast<std::uint64_t>(std::llround(scenario.duration_s / scenario.dt_control));

  VehicleState state;
  state.v_x = scenario.v_target;

  // Aim along the first leg so the run starts settled.
  double initial_bearing = 0.0;
  try {
    initial_bearing = target_yaw_from_gps(scenario.mission.home, scenario.mission.waypoints[0]);
  } catch (const DegeneratePair&) {
  }
  state.psi = math_from_geo(initial_bearing);

  SteeringState steering = make_steering_state(scenario.steering);
  SpeedState speed = make_speed_state(scenario.speed);
  EkfState ekf = make_ekf_state(scenario.ekf);

  std::size_t wp_index = 0;
  bool hold = false;
  bool prev_alarm = false;
  int gps_glitches = 0;

  // Navigation values held between fixes.
  GpsFix held_fix;
  held_fix.hdop = scenario.gps_noise.hdop_floor;
  held_fix.vdop = scenario.gps_noise.vdop_floor;
  held_fix.position = scenario.mission.home;
  double held_target_yaw_geo = initial_bearing;
  double held_distance = 0.0;
  SpoofPhase phase = SpoofPhase::Idle;

  ControlCommand cmd;

  for (std::uint64_t tick = 0; tick < total_ticks; ++tick) {
    const double t = tick * scenario.dt_control;

    // Receiver + navigator at the GPS rate.
    if (tick % gps_every == 0) {
      GeoPoint true_pos = frame.to_geo(state.x, state.y);
      GpsFix fix = synthesize_fix(true_pos, scenario.gps_noise, t, gps_rng);
      double bias_theta = 0.0;
      if (spoof) {
        SpoofState sp = spoof_phase(*spoof, t);
        phase = sp.phase;
        fix = spoof_fix(fix, *spoof, sp, spoof_rng);
        if (sp.phase == SpoofPhase::Captured)
          if (const auto* bias = std::get_if<BiasAngle>(&spoof->mode)) bias_theta = bias->theta;
      }
      held_fix = fix;

      // GPS position update with quality-scaled variance.
      LocalFrame::Xy meas;
      bool in_frame = true;
      try {
        meas = frame.to_local(fix.position);
      } catch (const OutOfFrame&) {
        in_frame = false;  // wildly spoofed fix; receiver output unusable
      }
      if (in_frame) {
        double rr = fix.hdop * scenario.ekf.gps_base_accuracy;
        std::vector<double> z{meas.x, meas.y};
        std::vector<Vec4> g{{1, 0, 0, 0}, {0, 1, 0, 0}};
        UpdateResult ur = ekf_peek(ekf, z, g, {rr * rr, rr * rr});
        record_channel(ekf, Channel::GpsX, ur.innovation[0], ur.nis[0], t, scenario.ekf);
        record_channel(ekf, Channel::GpsY, ur.innovation[1], ur.nis[1], t, scenario.ekf);
        if (ur.nis[0] + ur.nis[1] > scenario.ekf.glitch_reset_nis) {
          // Fix wildly inconsistent with the filter: reject it, and after
          // persistent disagreement re-anchor to the receiver's output.
          if (++gps_glitches >= scenario.ekf.glitch_reset_count) {
            ekf_reset_position(ekf, meas.x, meas.y, rr * rr);
            gps_glitches = 0;
          }
        } else {
          gps_glitches = 0;
          ekf_update(ekf, z, g, {rr * rr, rr * rr});
        }
      }

      // Motion planning runs on the fused position estimate.
      GeoPoint nav_pos = frame.to_geo(ekf.x[0], ekf.x[1]);
      MissionStatus ms = mission_step(scenario.mission, nav_pos, wp_index);
      wp_index = ms.index;
      if (ms.complete && !log.mission_complete) {
        log.mission_complete = true;
        log.completion_time = t;
      }
      if (!ms.complete) {
        held_distance = great_circle_distance(nav_pos, ms.target);
        try {
          held_target_yaw_geo = bias_theta == 0.0
                                    ? target_yaw_from_gps(nav_pos, ms.target)
                                    : spoofed_target_yaw(nav_pos, ms.target, bias_theta);
        } catch (const DegeneratePair&) {
          // On top of the waypoint: keep the previous bearing.
        }
      }
    } else if (spoof) {
      phase = spoof_phase(*spoof, t).phase;
    }

    // Inertial-side measurements at the control rate.
    double psi_compass_math =
        wrap_angle(state.psi + sensor_rng.normal(0.0, scenario.sensors.compass_std));
    double gyro_r = state.r + sensor_rng.normal(0.0, scenario.sensors.gyro_std);
    double odom_vx = std::max(0.0, state.v_x + sensor_rng.normal(0.0, scenario.sensors.odom_std));

    // Guidance: bearing error in compass terms, cross-track from the held fix.
    double heading_error = wrap_angle(held_target_yaw_geo - geo_from_math(psi_compass_math));
    double e = cross_track_error(held_target_yaw_geo, geo_from_math(psi_compass_math),
                                 held_distance);

    double v_cmd = scenario.v_target;
    if (hold) v_cmd = 0.0;
    if (log.mission_complete) v_cmd = 0.0;
    cmd.delta = hold || log.mission_complete
                    ? 0.0
                    : steering_controller(e, heading_error, scenario.steering, steering,
                                          scenario.dt_control);
    cmd.a_x = speed_controller(v_cmd, odom_vx, scenario.speed, speed, scenario.dt_control);

    // Filter prediction plus the fast gyro update.
    StateMatrices m{};  // frozen below the speed floor
    m.convention = scenario.convention;
    if (odom_vx > kMinLateralSpeed) m = state_matrices(scenario.vehicle, odom_vx, scenario.convention);
    ekf_predict(ekf, {cmd.delta, odom_vx, psi_compass_math}, m, scenario.ekf,
                scenario.dt_control);
    {
      std::vector<double> z{gyro_r};
      std::vector<Vec4> g{{0, 0, 0, 1}};
      UpdateResult ur = ekf_update(ekf, z, g, {scenario.ekf.r_gyro});
      record_channel(ekf, Channel::GyroR, ur.innovation[0], ur.nis[0], t, scenario.ekf);
    }

    bool alarm = failsafe_monitor(ekf, scenario.ekf, t);
    if (alarm && !prev_alarm) log.failsafe_alarm_times.push_back(t);
    if (alarm && !log.first_failsafe_time) log.first_failsafe_time = t;
    if (alarm && scenario.hold_on_failsafe) hold = true;
    prev_alarm = alarm;

    if (tick % feature_every == static_cast<std::uint64_t>(feature_phase)) {
      FeatureRow row;
      row.timestamp = t;
      row.lat = held_fix.position.lat_deg;
      row.lon = held_fix.position.lon_deg;
      row.hdop = held_fix.hdop;
      row.vdop = held_fix.vdop;
      row.sat_lock = held_fix.sat_lock;
      row.sat_count = held_fix.sat_count;
      row.e = e;
      row.delta = cmd.delta;
      row.x = ekf.x[0];
      row.y = ekf.x[1];
      row.psi = psi_compass_math;
      row.vx = odom_vx;
      row.vy = ekf.x[2];
      row.r = ekf.x[3];
      row.label = (phase == SpoofPhase::Jamming || phase == SpoofPhase::Captured) ? 1 : 0;
      log.rows.push_back(row);

      TruthSample ts;
      ts.t = t;
      ts.state = state;
      ts.estimate = ekf.x;
      ts.phase = phase;
      ts.failsafe = alarm;
      log.truth.push_back(ts);
    }

    if (log.mission_complete && state.v_x < kMinLateralSpeed) break;

    try {
      state = step(state, cmd.delta, cmd.a_x, scenario.vehicle, scenario.dt_control,
                   scenario.convention);
    } catch (const NonFiniteState&) {
      throw DivergedSimulation(tick);
    }
  }
  return log;
}

AttackSummary attack_trajectory_check(const SimLog& log) {
  AttackSummary s;
  std::vector<double> normal_e;
  std::vector<double> psi_attack, psi_normal;
  // Unwrap headings so the stall statistic is insensitive to the branch cut.
  double unwrapped = log.rows.empty() ? 0.0 : log.rows.front().psi;
  double prev = unwrapped;
  for (const FeatureRow& row : log.rows) {
    unwrapped += wrap_angle(row.psi - prev);
    prev = row.psi;
    if (row.label == 1) {
      s.max_abs_e_attack = std::max(s.max_abs_e_attack, std::fabs(row.e));
      psi_attack.push_back(unwrapped);
    } else {
      normal_e.push_back(std::fabs(row.e));
      psi_normal.push_back(unwrapped);
    }
    s.max_speed_cmd = std::max(s.max_speed_cmd, row.vx);
  }
  if (!normal_e.empty()) {
    std::sort(normal_e.begin(), normal_e.end());
    s.max_abs_e_normal = normal_e.back();
    std::size_t idx = static_cast<std::size_t>(0.999 * (normal_e.size() - 1));
    s.p999_abs_e_normal = normal_e[idx];
  }
  s.psi_variance_attack = variance(psi_attack);
  s.psi_variance_normal = variance(psi_normal);
  if (!psi_attack.empty()) {
    s.excess_cross_track = s.max_abs_e_attack > s.p999_abs_e_normal;
    s.heading_stalled = s.psi_variance_attack < 0.1 * s.psi_variance_normal;
  }
  return s;
}

}  // namespace avgps
