#include "doctest.h"

#include <cmath>
#include <random>

#include "mvmam/action.hpp"
#include "mvmam/models.hpp"

using namespace mvmam;

namespace {
Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

ModelSpec fig1() { return build_model("maier-stein", {}, "linear", {}, v2(-1, 0), v2(1, 0)); }

Trajectory constant_traj(const Vec& x, const std::vector<double>& nodes) {
  Trajectory t;
  t.grid.nodes = nodes;
  t.states.assign(nodes.size(), x);
  return t;
}
}  // namespace

TEST_CASE("constant path at the anchored equilibrium has zero action") {
  auto model = fig1();
  const auto path = constant_traj(v2(-1, 0), {0, 1, 2});
  const auto skel = constant_traj(v2(-1, 0), {0, 1, 2});
  CHECK(action(model, path, skel) == 0.0);
}

TEST_CASE("two-segment midpoint rule, frozen hand-computed value") {
  auto model = fig1();
  Trajectory path;
  path.grid.nodes = {0, 1, 2};
  path.states = {v2(-1, 0), v2(0, 0), v2(1, 0)};
  const auto skel = constant_traj(v2(-1, 0), {0, 1, 2});
  // segment drifts at midpoints: |b| = 0.875 and 1.125 pointing left, chord
  // velocity (1,0): contributions 0.5*1.875^2 and 0.5*2.125^2
  const double expected = 1.7578125 + 2.2578125;
  CHECK(action(model, path, skel) == doctest::Approx(expected).epsilon(1e-15));
  CHECK(action(model, path, skel) == doctest::Approx(4.015625).epsilon(1e-15));
}

TEST_CASE("grid mismatch is rejected") {
  auto model = fig1();
  const auto path = constant_traj(v2(-1, 0), {0, 1, 2});
  const auto skel = constant_traj(v2(-1, 0), {0, 0.5, 2});
  CHECK_THROWS_AS(action(model, path, skel), invalid_argument);
  CHECK_THROWS_AS(action_gradient_fd(model, path, skel, 1e-6), invalid_argument);
}

TEST_CASE("nonnegativity on random paths") {
  auto model = fig1();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> dist(-1.5, 1.5);
  for (int trial = 0; trial < 25; ++trial) {
    Trajectory path;
    path.grid.nodes = {0, 0.4, 1.1, 2.0, 3.0};
    for (int i = 0; i < 5; ++i) path.states.push_back(v2(dist(rng), dist(rng)));
    const auto skel = constant_traj(v2(-1, 0), path.grid.nodes);
    CHECK(action(model, path, skel) >= 0.0);
  }
}

TEST_CASE("quadrature refinement is second order on a smooth path") {
  auto model = fig1();
  auto sample = [&](int n) {
    Trajectory path;
    for (int i = 0; i <= n; ++i) {
      const double t = 2.0 * i / n;
      path.grid.nodes.push_back(t);
      path.states.push_back(v2(-1.0 + t, 0.5 * std::sin(M_PI * t / 2.0)));
    }
    return path;
  };
  auto act = [&](int n) {
    const auto path = sample(n);
    const auto skel = constant_traj(v2(-1, 0), path.grid.nodes);
    return action(model, path, skel);
  };
  const double ref = act(4096);
  const double c1 = std::abs(act(64) - ref);
  const double c2 = std::abs(act(128) - ref);
  const double ratio = c1 / c2;
  CHECK(ratio > 2.0);
  CHECK(ratio < 8.0);
}

TEST_CASE("finite-difference gradient vanishes at a global minimum") {
  auto model = fig1();
  const std::vector<double> nodes = {0, 0.5, 1.0, 1.5, 2.0};
  const auto path = constant_traj(v2(-1, 0), nodes);
  const auto skel = constant_traj(v2(-1, 0), nodes);
  const auto grad = action_gradient_fd(model, path, skel, 1e-5);
  for (const auto& g : grad) CHECK(g.norm() <= 1e-8);
  // endpoints are zero by convention
  CHECK(grad.front().norm() == 0.0);
  CHECK(grad.back().norm() == 0.0);
}

TEST_CASE("finite-difference gradient of the 3-node example is h^2-consistent") {
  auto model = fig1();
  Trajectory path;
  path.grid.nodes = {0, 1, 2};
  path.states = {v2(-1, 0), v2(0, 0), v2(1, 0)};
  const auto skel = constant_traj(v2(-1, 0), {0, 1, 2});
  const auto g1 = action_gradient_fd(model, path, skel, 1e-5);
  const auto g2 = action_gradient_fd(model, path, skel, 1e-6);
  CHECK(g1[1].norm() > 0.1);  // nonzero at the middle node
  CHECK((g1[1] - g2[1]).norm() < 1e-8);
}

TEST_CASE("time rescaling preserves the zero-gradient set of a stationary path") {
  auto model = fig1();
  for (double scale : {1.0, 3.0, 0.25}) {
    std::vector<double> nodes = {0, 0.5 * scale, 1.0 * scale, 2.0 * scale};
    const auto path = constant_traj(v2(-1, 0), nodes);
    const auto skel = constant_traj(v2(-1, 0), nodes);
    for (const auto& g : action_gradient_fd(model, path, skel, 1e-5)) {
      CHECK(g.norm() <= 1e-8);
    }
  }
}
