#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "avgps/linalg.hpp"
#include "avgps/vehicle.hpp"

namespace avgps {

struct CovarianceNotPSD : std::runtime_error {
  CovarianceNotPSD() : std::runtime_error("filter covariance lost symmetry beyond repair") {}
};

struct SingularInnovationCovariance : std::runtime_error {
  SingularInnovationCovariance() : std::runtime_error("innovation covariance not invertible") {}
};

// Monitored measurement channels for the failsafe.
enum class Channel { GpsX = 0, GpsY = 1, GyroR = 2 };
inline constexpr int kNumChannels = 3;

struct EkfConfig {
  // Continuous-time process noise densities, applied as Q*dt per prediction.
  double q_pos = 0.01;
  double q_vy = 1e-4;
  double q_r = 1e-4;
  double r_gyro = 1e-4;          // gyro measurement variance
  double gps_base_accuracy = 0.6;  // meters at hdop = 1; R_gps = (hdop*base)^2 per axis
  Mat4 p0 = Mat4::diag(1.0, 1.0, 0.1, 0.1);
  double failsafe_threshold = 9.0;  // normalized innovation squared (~3 sigma)
  double failsafe_window_s = 1.0;
  // Receiver glitch handling: GPS innovations beyond this NIS are rejected,
  // and after this many consecutive rejections the position states are
  // re-anchored to the reported fix.
  double glitch_reset_nis = 1000.0;
  int glitch_reset_count = 2;
};

struct ChannelMonitor {
  double last_innovation = 0.0;
  double last_nis = 0.0;
  bool above = false;
  double above_since = 0.0;
};

// Filter state over (x, y, v_y, r) in the local frame, math yaw convention.
struct EkfState {
  Vec4 x{};
  Mat4 P;
  std::array<ChannelMonitor, kNumChannels> channels{};
};

EkfState make_ekf_state(const EkfConfig& cfg);

// Known inputs for one prediction: steering command plus the dead-reckoning
// references (odometer speed, heading in math convention).
struct PredictInput {
  double delta = 0.0;
  double v_x = 0.0;
  double heading_math = 0.0;
};

// First-order discretization x <- (I + A dt) x + B u dt with the pose rows
// driven by v_x along the heading and coupled to lateral velocity through
// the prediction Jacobian; P <- F P F' + Q dt.
void ekf_predict(EkfState& s, const PredictInput& u, const StateMatrices& m,
                 const EkfConfig& cfg, double dt);

struct UpdateResult {
  std::vector<double> innovation;  // z - G x_prior, one per measurement row
  std::vector<double> nis;         // innovation^2 / S_ii per row
};

// Generic Kalman update for one- or two-row observation matrices with a
// diagonal measurement covariance. Throws SingularInnovationCovariance when
// G P G' + R cannot be inverted.
UpdateResult ekf_update(EkfState& s, const std::vector<double>& z,
                        const std::vector<Vec4>& g_rows, const std::vector<double>& r_diag);

// Innovations and NIS for a measurement without applying it.
UpdateResult ekf_peek(const EkfState& s, const std::vector<double>& z,
                      const std::vector<Vec4>& g_rows, const std::vector<double>& r_diag);

// Re-anchors the position states to a measured fix after persistent GPS
// glitches, keeping the lateral states.
void ekf_reset_position(EkfState& s, double x, double y, double var);

// Feeds one channel's normalized innovation into its failsafe monitor.
void record_channel(EkfState& s, Channel ch, double innovation, double nis, double t,
                    const EkfConfig& cfg);

// True when at least two channels have stayed above the threshold for the
// full window without interruption.
bool failsafe_monitor(const EkfState& s, const EkfConfig& cfg, double t);

}  // namespace avgps
