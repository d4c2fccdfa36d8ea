#include "avgps/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace avgps {

namespace {
double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

// Integral clamp sized so the integral term alone cannot exceed the output
// limit; zero when there is no integral action.
double windup_limit_for(const PidGains& g, double output_limit) {
  return g.ki > 0.0 ? output_limit / g.ki : 0.0;
}
}  // namespace

double pid_step(const PidGains& gains, PidState& state, double e, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("pid_step requires dt > 0");
  state.integral = clamp(state.integral + e * dt, -state.windup_limit, state.windup_limit);
  double derivative = (e - state.prev_error) / dt;
  state.prev_error = e;
  return gains.kp * e + gains.ki * state.integral + gains.kd * derivative;
}

SteeringState make_steering_state(const SteeringConfig& cfg) {
  SteeringState s;
  s.outer_pid.windup_limit = windup_limit_for(cfg.outer, cfg.heading_corr_max);
  s.inner_pid.windup_limit = windup_limit_for(cfg.inner, cfg.delta_max);
  return s;
}

double steering_controller(double cross_track_e, double heading_error, const SteeringConfig& cfg,
                           SteeringState& state, double dt) {
  double corr = clamp(pid_step(cfg.outer, state.outer_pid, cross_track_e, dt),
                      -cfg.heading_corr_max, cfg.heading_corr_max);
  double combined = heading_error + corr;
  return clamp(pid_step(cfg.inner, state.inner_pid, combined, dt), -cfg.delta_max, cfg.delta_max);
}

SpeedState make_speed_state(const SpeedConfig& cfg) {
  SpeedState s;
  s.pid.windup_limit = windup_limit_for(cfg.gains, cfg.accel_max);
  return s;
}

double speed_controller(double v_target, double v_x, const SpeedConfig& cfg, SpeedState& state,
                        double dt) {
  double u = pid_step(cfg.gains, state.pid, v_target - v_x, dt);
  return clamp(u, cfg.accel_min, cfg.accel_max);
}

}  // namespace avgps
