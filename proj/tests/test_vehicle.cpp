#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "avgps/geo.hpp"
#include "avgps/rng.hpp"
#include "avgps/vehicle.hpp"

using namespace avgps;

namespace {

VehicleParams table_params() { return VehicleParams::testbed(); }

VehicleParams random_params(CounterRng& rng) {
  VehicleParams p;
  p.mass_kg = rng.uniform(0.5, 2000.0);
  p.yaw_inertia = rng.uniform(0.01, 4000.0);
  p.lf_m = rng.uniform(0.05, 2.0);
  p.lr_m = rng.uniform(0.05, 2.0);
  p.cornering_front = rng.uniform(0.2, 1e5);
  p.cornering_rear = rng.uniform(0.2, 1e5);
  p.length_m = p.lf_m + p.lr_m + 0.1;
  p.width_m = 0.5;
  return p;
}

// Real parts of the eigenvalues of [[a11, a12], [a21, a22]].
std::pair<double, double> eigen_real_parts(const StateMatrices& m) {
  double tr = m.a11 + m.a22;
  double det = m.a11 * m.a22 - m.a12 * m.a21;
  double disc = tr * tr / 4.0 - det;
  if (disc < 0.0) return {tr / 2.0, tr / 2.0};
  double root = std::sqrt(disc);
  return {tr / 2.0 + root, tr / 2.0 - root};
}

}  // namespace

TEST_CASE("parameter validation") {
  VehicleParams p = table_params();
  CHECK_NOTHROW(p.validate());
  p.mass_kg = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = table_params();
  p.length_m = 0.3;  // axles would stick out
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("state_matrices reproduces the published testbed matrix") {
  StateMatrices m = state_matrices(table_params(), 1.0, SignConvention::PaperLiteral);
  // Printed instantiation: a = [0.8, 0; 0, 1.1169], b = [-0.4; -2.5384],
  // matched within 0.5% relative per entry.
  CHECK(m.a11 == doctest::Approx(0.8).epsilon(0.005));
  CHECK(m.a12 == 0.0);
  CHECK(m.a21 == 0.0);
  CHECK(m.a22 == doctest::Approx(1.1169).epsilon(0.005));
  CHECK(m.b11 == doctest::Approx(-0.4).epsilon(0.005));
  CHECK(m.b21 == doctest::Approx(-2.5384).epsilon(0.005));
  // Exact formula values for the same parameters.
  CHECK(m.a22 == doctest::Approx(0.0968 / 0.0867).epsilon(1e-12));
  CHECK(m.b21 == doctest::Approx(-0.22 / 0.0867).epsilon(1e-12));
}

TEST_CASE("state_matrices: zero cornering stiffness kills the lateral terms") {
  VehicleParams p = table_params();
  p.cornering_front = 0.0;
  p.cornering_rear = 0.0;
  StateMatrices m = state_matrices(p, 1.0, SignConvention::PaperLiteral);
  CHECK(m.a11 == 0.0);
  CHECK(m.a12 == 0.0);
  CHECK(m.a21 == 0.0);
  CHECK(m.a22 == 0.0);
  CHECK(m.b11 == 0.0);
  CHECK(m.b21 == 0.0);
}

TEST_CASE("state_matrices: stable convention flips the system matrix") {
  StateMatrices m = state_matrices(table_params(), 1.0, SignConvention::StandardStable);
  CHECK(m.a11 == doctest::Approx(-0.8));
  CHECK(m.b11 == doctest::Approx(-0.4));
  auto [r1, r2] = eigen_real_parts(m);
  CHECK(r1 <= 0.0);
  CHECK(r2 <= 0.0);
}

TEST_CASE("state_matrices: near-zero speed rejected") {
  CHECK_THROWS_AS(state_matrices(table_params(), 0.0, SignConvention::StandardStable),
                  NearZeroSpeed);
  CHECK_THROWS_AS(state_matrices(table_params(), 0.005, SignConvention::StandardStable),
                  NearZeroSpeed);
}

TEST_CASE("property: stable convention eigenvalues stay in the left half plane") {
  CounterRng rng(101, 1);
  for (int i = 0; i < 500; ++i) {
    VehicleParams p = random_params(rng);
    double v = rng.uniform(0.5, 30.0);
    auto [r1, r2] = eigen_real_parts(state_matrices(p, v, SignConvention::StandardStable));
    CHECK(r1 <= 1e-12);
    CHECK(r2 <= 1e-12);
  }
}

TEST_CASE("property: entry scalings in v_x follow the defining formulas") {
  CounterRng rng(102, 2);
  for (int i = 0; i < 200; ++i) {
    VehicleParams p = random_params(rng);
    double v = rng.uniform(0.2, 10.0);
    double k = rng.uniform(1.5, 5.0);
    for (SignConvention conv : {SignConvention::PaperLiteral, SignConvention::StandardStable}) {
      StateMatrices m1 = state_matrices(p, v, conv);
      StateMatrices mk = state_matrices(p, k * v, conv);
      CHECK(mk.a11 == doctest::Approx(m1.a11 / k).epsilon(1e-12));
      CHECK(mk.a12 == doctest::Approx(m1.a12 / (k * k)).epsilon(1e-12));
      CHECK(mk.a21 == doctest::Approx(m1.a21).epsilon(1e-12));
      CHECK(mk.a22 == doctest::Approx(m1.a22 / k).epsilon(1e-12));
      CHECK(mk.b11 == doctest::Approx(m1.b11 / k).epsilon(1e-12));
      CHECK(mk.b21 == doctest::Approx(m1.b21).epsilon(1e-12));
    }
  }
}

TEST_CASE("slip angles") {
  VehicleParams p = table_params();
  VehicleState s;
  s.v_x = 1.0;

  auto [af0, ar0] = slip_angles(s, 0.0, p);
  CHECK(af0 == 0.0);
  CHECK(ar0 == 0.0);

  s.v_y = 0.1;
  s.r = 0.5;
  auto [af, ar] = slip_angles(s, 0.0, p);
  CHECK(af == doctest::Approx(0.21).epsilon(1e-12));
  CHECK(ar == doctest::Approx(-0.01).epsilon(1e-9));

  s.v_y = 0.0;
  s.r = 0.0;
  auto [afd, ard] = slip_angles(s, 0.1, p);
  CHECK(afd == doctest::Approx(-0.1));
  CHECK(ard == 0.0);

  s.v_x = 0.0;
  CHECK_THROWS_AS(slip_angles(s, 0.0, p), NearZeroSpeed);
}

TEST_CASE("tire forces") {
  VehicleParams p = table_params();
  auto [f0, r0] = tire_forces(0.0, 0.0, p);
  CHECK(f0 == 0.0);
  CHECK(r0 == 0.0);

  auto [ff, fr] = tire_forces(0.21, -0.01, p);
  CHECK(ff == doctest::Approx(-0.21));
  CHECK(fr == doctest::Approx(0.01));

  // Linearity in the stiffness.
  VehicleParams scaled = p;
  scaled.cornering_front *= 3.0;
  auto [ff3, fr3] = tire_forces(0.21, -0.01, scaled);
  CHECK(ff3 == doctest::Approx(3.0 * ff));
  CHECK(fr3 == doctest::Approx(fr));
}

TEST_CASE("lateral derivatives from the published matrix") {
  StateMatrices m = state_matrices(table_params(), 1.0, SignConvention::PaperLiteral);
  VehicleState s;
  s.v_x = 1.0;
  s.v_y = 0.1;
  LateralDeriv d = lateral_derivatives(s, 0.0, m);
  CHECK(d.vy_dot == doctest::Approx(0.08));
  CHECK(d.r_dot == 0.0);

  s.v_y = 0.0;
  d = lateral_derivatives(s, 0.0, m);
  CHECK(d.vy_dot == 0.0);
  CHECK(d.r_dot == 0.0);

  d = lateral_derivatives(s, 0.1, m);
  CHECK(d.vy_dot == doctest::Approx(-0.04));
  CHECK(d.r_dot == doctest::Approx(-0.25375).epsilon(1e-4));
}

TEST_CASE("force route equals matrix route at nominal speed (both conventions)") {
  CounterRng rng(103, 3);
  for (int i = 0; i < 1000; ++i) {
    VehicleParams p = random_params(rng);
    VehicleState s;
    s.v_x = 1.0;
    s.v_y = rng.uniform(-2.0, 2.0);
    s.r = rng.uniform(-3.0, 3.0);
    double delta = rng.uniform(-0.5, 0.5);
    for (SignConvention conv : {SignConvention::PaperLiteral, SignConvention::StandardStable}) {
      StateMatrices m = state_matrices(p, s.v_x, conv);
      LateralDeriv via_matrix = lateral_derivatives(s, delta, m);
      LateralDeriv via_forces = lateral_derivatives_from_forces(s, delta, p, conv);
      double scale = std::max({1.0, std::fabs(via_matrix.vy_dot), std::fabs(via_matrix.r_dot)});
      CHECK(std::fabs(via_matrix.vy_dot - via_forces.vy_dot) / scale < 1e-9);
      CHECK(std::fabs(via_matrix.r_dot - via_forces.r_dot) / scale < 1e-9);
    }
  }
}

TEST_CASE("pose derivatives") {
  VehicleState s;
  s.v_x = 1.0;
  PoseDeriv d = pose_derivatives(s);
  CHECK(d.x_dot == doctest::Approx(1.0));
  CHECK(d.y_dot == doctest::Approx(0.0));
  CHECK(d.psi_dot == 0.0);

  s.psi = kPi / 2;
  d = pose_derivatives(s);
  CHECK(d.x_dot == doctest::Approx(0.0));
  CHECK(d.y_dot == doctest::Approx(1.0));

  s.psi = 0.0;
  s.v_y = 1.0;
  d = pose_derivatives(s);
  CHECK(d.x_dot == doctest::Approx(1.0));
  CHECK(d.y_dot == doctest::Approx(1.0));
}

TEST_CASE("step: straight line advances x only") {
  VehicleState s;
  s.v_x = 1.0;
  VehicleState n = step(s, 0.0, 0.0, table_params(), 0.01, SignConvention::StandardStable);
  CHECK(n.x == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(n.y == 0.0);
  CHECK(n.psi == 0.0);
  CHECK(n.v_x == 1.0);
  CHECK(n.v_y == 0.0);
  CHECK(n.r == 0.0);
}

TEST_CASE("step: one RK4 step sits within O(dt^2) of the Euler reference") {
  VehicleState s;
  s.v_x = 1.0;
  s.v_y = 0.1;
  VehicleState n = step(s, 0.0, 0.0, table_params(), 0.01, SignConvention::PaperLiteral);
  // Hand Euler from the printed matrix: 0.1 + 0.01 * (0.8 * 0.1) = 0.1008.
  CHECK(std::fabs(n.v_y - 0.1008) < 1e-5);
}

TEST_CASE("step: two half steps agree with one full step") {
  VehicleState s;
  s.v_x = 1.0;
  s.v_y = 0.3;
  s.r = -0.2;
  VehicleState two = step(step(s, 0.05, 0.1, table_params(), 0.01, SignConvention::StandardStable),
                          0.05, 0.1, table_params(), 0.01, SignConvention::StandardStable);
  VehicleState one = step(s, 0.05, 0.1, table_params(), 0.02, SignConvention::StandardStable);
  CHECK(std::fabs(two.v_y - one.v_y) <= 1e-6);
  CHECK(std::fabs(two.r - one.r) <= 1e-6);
  CHECK(std::fabs(two.x - one.x) <= 1e-6);
  CHECK(std::fabs(two.y - one.y) <= 1e-6);
}

TEST_CASE("step: deterministic bit-for-bit") {
  VehicleState s;
  s.v_x = 1.3;
  s.v_y = -0.05;
  s.r = 0.4;
  s.psi = 2.1;
  VehicleState a = step(s, 0.21, -0.3, table_params(), 0.01, SignConvention::StandardStable);
  VehicleState b = step(s, 0.21, -0.3, table_params(), 0.01, SignConvention::StandardStable);
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
  CHECK(a.psi == b.psi);
  CHECK(a.v_x == b.v_x);
  CHECK(a.v_y == b.v_y);
  CHECK(a.r == b.r);
}

TEST_CASE("step: yaw stays wrapped over a long spin") {
  VehicleState s;
  s.v_x = 1.0;
  for (int i = 0; i < 5000; ++i) {
    s = step(s, 0.4, 0.0, table_params(), 0.01, SignConvention::StandardStable);
    CHECK(s.psi > -kPi - 1e-12);
    CHECK(s.psi <= kPi + 1e-12);
  }
}
