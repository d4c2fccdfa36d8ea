#pragma once

#include "avgps/geo.hpp"

namespace avgps {

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
};

struct PidState {
  double integral = 0.0;
  double prev_error = 0.0;
  double windup_limit = 1e308;  // |integral| is clamped to this
};

// One discrete PID evaluation: advances the clamped integral by e*dt, then
// returns kp*e + ki*integral + kd*(e - prev)/dt.
double pid_step(const PidGains& gains, PidState& state, double e, double dt);

// Cascade steering: the outer loop turns cross-track error into a heading
// correction, the inner loop turns the combined heading error into a
// steering angle. Positive error steers clockwise (compass convention).
struct SteeringConfig {
  PidGains outer{0.8, 0.0, 0.0};
  PidGains inner{1.5, 0.05, 0.1};
  double heading_corr_max = kPi / 2.0;
  double delta_max = 0.8;  // rad
};

struct SteeringState {
  PidState outer_pid;
  PidState inner_pid;
};

SteeringState make_steering_state(const SteeringConfig& cfg);

double steering_controller(double cross_track_e, double heading_error, const SteeringConfig& cfg,
                           SteeringState& state, double dt);

// Longitudinal speed loop, output clamped to the actuator range.
struct SpeedConfig {
  PidGains gains{1.2, 0.02, 0.0};
  double accel_min = -2.0;  // m/s^2
  double accel_max = 1.0;
};

struct SpeedState {
  PidState pid;
};

SpeedState make_speed_state(const SpeedConfig& cfg);

double speed_controller(double v_target, double v_x, const SpeedConfig& cfg, SpeedState& state,
                        double dt);

// Actuator command pair, already clamped by the controllers.
struct ControlCommand {
  double delta = 0.0;  // rad
  double a_x = 0.0;    // m/s^2
};

}  // namespace avgps
