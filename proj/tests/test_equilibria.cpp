#include "doctest.h"

#include <algorithm>
#include <random>

#include "mvmam/equilibria.hpp"
#include "mvmam/models.hpp"

using namespace mvmam;

namespace {
Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

std::vector<Vec> grid5x5() {
  std::vector<Vec> seeds;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      seeds.push_back(v2(-1.5 + 0.75 * i, -1.5 + 0.75 * j));
    }
  }
  return seeds;
}
}  // namespace

TEST_CASE("classify by eigenvalue real parts") {
  Mat stable(2, 2), saddle(2, 2), marginal(2, 2), spiral(2, 2);
  stable << -3, 0, 0, -1;
  saddle << 1, 0, 0, -1;
  marginal << 0, 0, 0, -1;
  spiral << -2, 15.9, -15.9, -2;  // complex pair with negative real part
  CHECK(classify(stable, 1e-8) == StabilityKind::stable);
  CHECK(classify(saddle, 1e-8) == StabilityKind::saddle);
  CHECK(classify(marginal, 1e-8) == StabilityKind::non_hyperbolic);
  CHECK(classify(spiral, 1e-8) == StabilityKind::stable);
  CHECK(classify(-stable, 1e-8) == StabilityKind::unstable);

  Mat nan2(2, 2);
  nan2 << std::nan(""), 0, 0, 1;
  CHECK_THROWS_AS(classify(nan2, 1e-8), invalid_argument);

  Mat big(3, 3);
  big << -1, 0.2, 0, 0, 2, 0.1, 0, 0, -3;  // mixed signs through the eigensolver path
  CHECK(classify(big, 1e-8) == StabilityKind::saddle);
}

TEST_CASE("F_L drift has the single stable root (-1, 0)") {
  auto model = build_model("maier-stein", {}, "linear", {}, v2(-1, 0), v2(1, 0));
  const auto roots = find_fixed_points(model, v2(-1, 0), grid5x5(), 1e-12, 100);
  REQUIRE(roots.size() == 1);
  CHECK((roots[0].location - v2(-1, 0)).norm() < 1e-10);
  CHECK(roots[0].kind == StabilityKind::stable);
  REQUIRE(roots[0].eigen_real_parts.size() == 2);
  CHECK(roots[0].eigen_real_parts[0] == doctest::Approx(-3.0).epsilon(1e-8));
  CHECK(roots[0].eigen_real_parts[1] == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(roots[0].residual_norm <= 1e-12);
}

TEST_CASE("F_BS drift has exactly three roots: two stable, one saddle") {
  auto model = build_model("maier-stein", {}, "biot-savart-regularized", {}, v2(-1, 0), v2(1, 0));
  const auto roots = find_fixed_points(model, v2(-1, 0), grid5x5(), 1e-12, 100);
  REQUIRE(roots.size() == 3);
  int stable = 0, saddle = 0;
  for (const auto& fp : roots) {
    // independent re-evaluation of the drift at each reported root
    CHECK(eval_b(model, fp.location, v2(-1, 0)).norm() <= 1e-12);
    if (fp.kind == StabilityKind::stable) ++stable;
    if (fp.kind == StabilityKind::saddle) ++saddle;
  }
  CHECK(stable == 2);
  CHECK(saddle == 1);
  // the anchor itself remains an exact equilibrium
  const double to_anchor =
      std::min({(roots[0].location - v2(-1, 0)).norm(), (roots[1].location - v2(-1, 0)).norm(),
                (roots[2].location - v2(-1, 0)).norm()});
  CHECK(to_anchor < 1e-12);
}

TEST_CASE("zero interaction recovers the Maier-Stein equilibria of V") {
  auto model = build_model("maier-stein", {}, "zero", {}, v2(-1, 0), v2(1, 0));
  std::vector<Vec> seeds;
  for (double u = -1.4; u <= 1.5; u += 0.35) {
    for (double v = -0.7; v <= 0.75; v += 0.35) seeds.push_back(v2(u, v));
  }
  const auto roots = find_fixed_points(model, v2(-1, 0), seeds, 1e-12, 100);
  REQUIRE(roots.size() == 3);
  CHECK((roots[0].location - v2(-1, 0)).norm() < 1e-10);
  CHECK((roots[1].location - v2(0, 0)).norm() < 1e-10);
  CHECK((roots[2].location - v2(1, 0)).norm() < 1e-10);
  CHECK(roots[0].kind == StabilityKind::stable);
  CHECK(roots[1].kind == StabilityKind::saddle);
  CHECK(roots[2].kind == StabilityKind::stable);
}

TEST_CASE("deduplication is independent of seed order") {
  auto model = build_model("maier-stein", {}, "biot-savart-regularized", {}, v2(-1, 0), v2(1, 0));
  auto seeds = grid5x5();
  const auto a = find_fixed_points(model, v2(-1, 0), seeds, 1e-12, 100);
  std::mt19937_64 rng(41);
  std::shuffle(seeds.begin(), seeds.end(), rng);
  const auto b = find_fixed_points(model, v2(-1, 0), seeds, 1e-12, 100);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK((a[i].location - b[i].location).norm() < 1e-11);
    CHECK(a[i].kind == b[i].kind);
  }
}

TEST_CASE("diverging seeds report no root instead of failing the search") {
  auto model = build_model("maier-stein", {}, "linear", {}, v2(-1, 0), v2(1, 0));
  const auto roots = find_fixed_points(model, v2(-1, 0), {v2(80.0, 80.0)}, 1e-12, 6);
  CHECK(roots.empty());
  CHECK_THROWS_AS(find_fixed_points(model, v2(-1, 0), {}, 1e-12, 10), invalid_argument);
}
