#pragma once

#include <stdexcept>
#include <utility>

namespace avgps {

struct NearZeroSpeed : std::domain_error {
  NearZeroSpeed() : std::domain_error("lateral model undefined near zero longitudinal speed") {}
};

struct NonFiniteState : std::runtime_error {
  NonFiniteState() : std::runtime_error("vehicle state became non-finite") {}
};

// Below this longitudinal speed the lateral model is singular and the
// lateral states are held frozen.
inline constexpr double kMinLateralSpeed = 0.01;

// Physical constants of the bicycle model. All strictly positive and
// l_f + l_r must not exceed the body length.
struct VehicleParams {
  double mass_kg = 2.5;
  double yaw_inertia = 0.0867;      // kg m^2
  double lf_m = 0.22;               // front axle to center of mass
  double lr_m = 0.22;               // rear axle to center of mass
  double cornering_front = 1.0;     // N/rad
  double cornering_rear = 1.0;      // N/rad
  double length_m = 0.56;
  double width_m = 0.32;
  double nominal_speed = 1.0;       // m/s

  void validate() const;

  // One-tenth-scale rover used throughout the default scenarios.
  static VehicleParams testbed();
};

struct VehicleState {
  double x = 0.0;     // m, inertial east
  double y = 0.0;     // m, inertial north
  double psi = 0.0;   // rad, math convention (0 = +x, counterclockwise), wrapped to (-pi, pi]
  double v_x = 0.0;   // m/s
  double v_y = 0.0;   // m/s
  double r = 0.0;     // rad/s
};

// The two-state lateral model has a sign ambiguity between the published
// formulas and the conventional stable form; both are supported.
// PaperLiteral reproduces the published numeric matrix (positive cornering
// terms, unstable open loop). StandardStable negates the cornering terms of
// the system matrix so the homogeneous dynamics are stable.
enum class SignConvention { PaperLiteral, StandardStable };

struct StateMatrices {
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;
  double b11 = 0.0, b21 = 0.0;
  SignConvention convention = SignConvention::StandardStable;
};

// Builds the 2x2 lateral system for the current longitudinal speed.
// Throws NearZeroSpeed below kMinLateralSpeed.
StateMatrices state_matrices(const VehicleParams& p, double v_x, SignConvention convention);

// Front/rear slip angles under the small-angle approximation.
std::pair<double, double> slip_angles(const VehicleState& s, double delta,
                                      const VehicleParams& p);

// Linear tire model: F = -C * alpha per axle.
std::pair<double, double> tire_forces(double alpha_f, double alpha_r, const VehicleParams& p);

struct LateralDeriv {
  double vy_dot = 0.0;
  double r_dot = 0.0;
};

// Matrix route: [vy_dot, r_dot] = a [v_y, r] + b delta.
LateralDeriv lateral_derivatives(const VehicleState& s, double delta, const StateMatrices& m);

// Force route: same derivatives assembled from explicit slip angles and tire
// forces (lateral force balance and yaw moment). Agrees with the matrix
// route at the nominal-speed instantiation for the matching convention.
LateralDeriv lateral_derivatives_from_forces(const VehicleState& s, double delta,
                                             const VehicleParams& p, SignConvention convention);

struct PoseDeriv {
  double x_dot = 0.0;
  double y_dot = 0.0;
  double psi_dot = 0.0;
};

// Planar kinematics with sideslip: v = hypot(v_x, v_y), beta = atan2(v_y, v_x),
// x_dot = v cos(psi + beta), y_dot = v sin(psi + beta), psi_dot = r.
PoseDeriv pose_derivatives(const VehicleState& s);

// One fixed-step RK4 integration of the full state. Lateral dynamics are
// evaluated with matrices rebuilt at each stage speed and frozen below the
// speed floor; v_x never drops below zero. Throws NonFiniteState if the
// result is not finite.
VehicleState step(const VehicleState& s, double delta, double a_x, const VehicleParams& p,
                  double dt, SignConvention convention);

}  // namespace avgps
