#include "avgps/vehicle.hpp"

#include <cmath>

#include "avgps/geo.hpp"

namespace avgps {

void VehicleParams::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(mass_kg) || !positive(yaw_inertia) || !positive(lf_m) || !positive(lr_m) ||
      !positive(cornering_front) || !positive(cornering_rear) || !positive(length_m) ||
      !positive(width_m) || !positive(nominal_speed))
    throw std::invalid_argument("vehicle parameters must be strictly positive");
  if (lf_m + lr_m > length_m)
    throw std::invalid_argument("axle distances exceed body length");
}

VehicleParams VehicleParams::testbed() { return VehicleParams{}; }

StateMatrices state_matrices(const VehicleParams& p, double v_x, SignConvention convention) {
  if (!(v_x > kMinLateralSpeed)) throw NearZeroSpeed();
  StateMatrices m;
  m.convention = convention;
  m.a11 = (p.cornering_front + p.cornering_rear) / (p.mass_kg * v_x);
  m.a12 = (p.lf_m * p.cornering_front - p.lr_m * p.cornering_rear) / (p.mass_kg * v_x * v_x);
  m.a21 = (p.lf_m * p.cornering_front - p.lr_m * p.cornering_rear) / p.yaw_inertia;
  // Sum form: the difference form evaluates to zero for a symmetric axle
  // layout, which contradicts the published numeric instantiation.
  m.a22 = (p.lf_m * p.lf_m * p.cornering_front + p.lr_m * p.lr_m * p.cornering_rear) /
          (p.yaw_inertia * v_x);
  m.b11 = -p.cornering_front / (p.mass_kg * v_x);
  m.b21 = -p.lf_m * p.cornering_front / p.yaw_inertia;
  if (convention == SignConvention::StandardStable) {
    m.a11 = -m.a11;
    m.a12 = -m.a12;
    m.a21 = -m.a21;
    m.a22 = -m.a22;
  }
  return m;
}

std::pair<double, double> slip_angles(const VehicleState& s, double delta,
                                      const VehicleParams& p) {
  if (!(s.v_x > kMinLateralSpeed)) throw NearZeroSpeed();
  double alpha_f = (s.v_y + p.lf_m * s.r) / s.v_x - delta;
  double alpha_r = (s.v_y - p.lr_m * s.r) / s.v_x;
  return {alpha_f, alpha_r};
}

std::pair<double, double> tire_forces(double alpha_f, double alpha_r, const VehicleParams& p) {
  return {-p.cornering_front * alpha_f, -p.cornering_rear * alpha_r};
}

LateralDeriv lateral_derivatives(const VehicleState& s, double delta, const StateMatrices& m) {
  return {m.a11 * s.v_y + m.a12 * s.r + m.b11 * delta,
          m.a21 * s.v_y + m.a22 * s.r + m.b21 * delta};
}

LateralDeriv lateral_derivatives_from_forces(const VehicleState& s, double delta,
                                             const VehicleParams& p,
                                             SignConvention convention) {
  // The steering input enters the published matrix with the opposite sign of
  // the slip-angle composition, so the stable convention feeds the slip
  // angles a negated steering command while the literal convention negates
  // the assembled force balance.
  double d = (convention == SignConvention::StandardStable) ? -delta : delta;
  auto [af, ar] = slip_angles(s, d, p);
  auto [fyf, fyr] = tire_forces(af, ar, p);
  double vy_dot = (fyf + fyr) / p.mass_kg;
  double r_dot = (p.lf_m * fyf - p.lr_m * fyr) / p.yaw_inertia;
  if (convention == SignConvention::PaperLiteral) {
    vy_dot = -vy_dot;
    r_dot = -r_dot;
  }
  return {vy_dot, r_dot};
}

PoseDeriv pose_derivatives(const VehicleState& s) {
  double v = std::hypot(s.v_x, s.v_y);
  double beta = (v > 0.0) ? std::atan2(s.v_y, s.v_x) : 0.0;
  return {v * std::cos(s.psi + beta), v * std::sin(s.psi + beta), s.r};
}

namespace {

struct Deriv {
  double x, y, psi, v_x, v_y, r;
};

Deriv derivative(const VehicleState& s, double delta, double a_x, const VehicleParams& p,
                 SignConvention convention) {
  LateralDeriv lat{};
  if (s.v_x > kMinLateralSpeed) {
    lat = lateral_derivatives(s, delta, state_matrices(p, s.v_x, convention));
  }
  PoseDeriv pose = pose_derivatives(s);
  double vx_dot = a_x + s.r * s.v_y;
  return {pose.x_dot, pose.y_dot, pose.psi_dot, vx_dot, lat.vy_dot, lat.r_dot};
}

VehicleState advanced(const VehicleState& s, const Deriv& d, double h) {
  VehicleState n = s;
  n.x += h * d.x;
  n.y += h * d.y;
  n.psi += h * d.psi;
  n.v_x += h * d.v_x;
  n.v_y += h * d.v_y;
  n.r += h * d.r;
  return n;
}

}  // namespace

VehicleState step(const VehicleState& s, double delta, double a_x, const VehicleParams& p,
                  double dt, SignConvention convention) {
  Deriv k1 = derivative(s, delta, a_x, p, convention);
  Deriv k2 = derivative(advanced(s, k1, 0.5 * dt), delta, a_x, p, convention);
  Deriv k3 = derivative(advanced(s, k2, 0.5 * dt), delta, a_x, p, convention);
  Deriv k4 = derivative(advanced(s, k3, dt), delta, a_x, p, convention);

  VehicleState n = s;
  double w = dt / 6.0;
  n.x += w * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
  n.y += w * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
  n.psi += w * (k1.psi + 2.0 * k2.psi + 2.0 * k3.psi + k4.psi);
  n.v_x += w * (k1.v_x + 2.0 * k2.v_x + 2.0 * k3.v_x + k4.v_x);
  n.v_y += w * (k1.v_y + 2.0 * k2.v_y + 2.0 * k3.v_y + k4.v_y);
  n.r += w * (k1.r + 2.0 * k2.r + 2.0 * k3.r + k4.r);

  n.psi = wrap_angle(n.psi);
  if (n.v_x < 0.0) n.v_x = 0.0;
  if (!(std::isfinite(n.x) && std::isfinite(n.y) && std::isfinite(n.psi) &&
        std::isfinite(n.v_x) && std::isfinite(n.v_y) && std::isfinite(n.r)))
    throw NonFiniteState();
  return n;
}

}  // namespace avgps
