#include "doctest.h"

#include <cmath>

#include "mvmam/action.hpp"
#include "mvmam/models.hpp"
#include "mvmam/skeleton.hpp"

using namespace mvmam;

namespace {
Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

ModelSpec fig1() { return build_model("maier-stein", {}, "linear", {}, v2(-1, 0), v2(1, 0)); }
ModelSpec fig2() {
  return build_model("maier-stein", {}, "biot-savart-regularized", {}, v2(-1, 0), v2(1, 0));
}

TimeGrid grid_of(std::initializer_list<double> nodes) {
  TimeGrid g;
  g.nodes = nodes;
  return g;
}
}  // namespace

TEST_CASE("skeleton stays at x1 when x1 is an equilibrium, bitwise") {
  auto model = fig1();
  const auto traj = integrate_skeleton(model, v2(-1, 0), grid_of({0, 0.3, 1.0, 2.5, 7.0}));
  for (const auto& s : traj.states) {
    CHECK(s(0) == -1.0);
    CHECK(s(1) == 0.0);
  }
}

TEST_CASE("one Euler step matches the hand value") {
  auto model = fig1();
  const auto traj = integrate_skeleton(model, v2(0.5, 0), grid_of({0, 0.1}));
  CHECK(traj.states[1](0) == doctest::Approx(0.5375).epsilon(1e-15));
  CHECK(traj.states[1](1) == 0.0);
}

TEST_CASE("zero interaction at an equilibrium of V gives a constant trajectory") {
  auto model = build_model("maier-stein", {}, "zero", {}, v2(-1, 0), v2(1, 0));
  const auto traj = integrate_skeleton(model, v2(1, 0), grid_of({0, 0.5, 1.0, 4.0}));
  for (const auto& s : traj.states) {
    CHECK(s(0) == 1.0);
    CHECK(s(1) == 0.0);
  }
}

TEST_CASE("grid fidelity: output reuses the input nodes exactly") {
  auto model = fig1();
  TimeGrid grid = grid_of({0, 0.17, 0.2, 1.3, 2.0});
  const auto traj = integrate_skeleton(model, v2(0.2, 0.1), grid);
  CHECK(traj.grid.nodes == grid.nodes);
}

TEST_CASE("integrate_skeleton rejects bad grids and blows up loudly") {
  auto model = fig1();
  CHECK_THROWS_AS(integrate_skeleton(model, v2(0, 0), grid_of({0.5, 1.0})), invalid_argument);
  CHECK_THROWS_AS(integrate_skeleton(model, v2(0, 0), grid_of({0, 1.0, 0.5})), invalid_argument);
  // a huge Euler step on the cubic drift explodes past the 1e8 guard
  CHECK_THROWS_AS(integrate_skeleton(model, v2(50, 0), grid_of({0, 1e9, 2e9})), numerical_error);
}

TEST_CASE("integrate_flow is stationary at a fixed point of the effective drift") {
  auto model = fig1();
  const auto traj = integrate_flow(model, v2(-1, 0), v2(-1, 0), 1.0, 0.01);
  for (const auto& s : traj.states) CHECK((s - v2(-1, 0)).norm() == 0.0);
}

TEST_CASE("flow trajectories are attracted to the unique stable point of b_L") {
  auto model = fig1();
  for (const Vec& x0 : {v2(0.5, 0.5), v2(1.2, -0.3), v2(-0.2, 1.0)}) {
    const auto traj = integrate_flow(model, v2(-1, 0), x0, 30.0, 1e-3);
    const double d_end = (traj.states.back() - v2(-1, 0)).norm();
    const double d_mid = (traj.states[traj.states.size() / 2] - v2(-1, 0)).norm();
    CHECK(d_end < 1e-3);
    CHECK(d_end <= d_mid);
  }
}

TEST_CASE("integrate_flow converges at fourth order") {
  auto model = fig2();
  const Vec x0 = v2(0.4, 0.6);
  const Vec anchor = v2(-1, 0);
  const double t_end = 1.0;
  auto endpoint = [&](double dt) {
    return integrate_flow(model, anchor, x0, t_end, dt).states.back();
  };
  const Vec ref = endpoint(1.0 / 512.0);
  const double e1 = (endpoint(1.0 / 32.0) - ref).norm();
  const double e2 = (endpoint(1.0 / 64.0) - ref).norm();
  const double ratio = e1 / e2;  // ~16 for a 4th-order one-step method
  CHECK(ratio > 8.0);
  CHECK(ratio < 32.0);
}

TEST_CASE("equipotential_field runs one flow per seed and keeps going on failure") {
  auto model = fig1();
  std::vector<Vec> seeds = {v2(-1, 0), v2(0.5, 0.5)};
  auto flows = equipotential_field(model, v2(-1, 0), seeds, 0.5, 1e-3);
  REQUIRE(flows.size() == 2);
  CHECK(flows[0].ok);
  CHECK(flows[1].ok);
  CHECK((flows[0].trajectory.states.back() - v2(-1, 0)).norm() == 0.0);

  CHECK_THROWS_AS(equipotential_field(model, v2(-1, 0), {}, 0.5, 1e-3), invalid_argument);

  // a diverging seed reports its index, the good seed still returns
  std::vector<Vec> mixed = {v2(1e7, 1e7), v2(-1, 0)};
  auto partial = equipotential_field(model, v2(-1, 0), mixed, 1.0, 0.5);
  REQUIRE(partial.size() == 2);
  CHECK_FALSE(partial[0].ok);
  CHECK(partial[0].error.find("seed 0") != std::string::npos);
  CHECK(partial[1].ok);
}

TEST_CASE("zero-action property of flow trajectories") {
  auto model = fig1();
  const auto flow = integrate_flow(model, v2(-1, 0), v2(0.3, 0.4), 1.0, 1e-4);
  const auto skel = integrate_skeleton(model, v2(-1, 0), flow.grid);
  CHECK(action(model, flow, skel) < 1e-6);
}
