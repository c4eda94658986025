#include "mvmam/skeleton.hpp"

#include <cmath>

namespace mvmam {

namespace {
constexpr double kBlowupNorm = 1e8;

void guard(const Vec& state, std::size_t step, const char* what) {
  if (!state.allFinite() || state.cwiseAbs().maxCoeff() > kBlowupNorm) {
    throw numerical_error(std::string(what) + ": numerical blowup at step " +
                          std::to_string(step));
  }
}
}  // namespace

void TimeGrid::validate() const {
  if (nodes.size() < 2) throw invalid_argument("TimeGrid: need at least two nodes");
  if (nodes.front() != 0.0) throw invalid_argument("TimeGrid: nodes[0] must be 0");
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    if (!(nodes[i] < nodes[i + 1]) || !std::isfinite(nodes[i + 1])) {
      throw invalid_argument("TimeGrid: nodes must be finite and strictly increasing");
    }
  }
}

TimeGrid make_uniform_grid(double t_end, double dt) {
  if (!(dt > 0.0) || !(t_end > 0.0)) {
    throw invalid_argument("make_uniform_grid: dt and t_end must be positive");
  }
  TimeGrid grid;
  grid.nodes.push_back(0.0);
  // guard against a sliver last step from floating-point division
  const auto n_full = static_cast<std::size_t>(std::floor(t_end / dt + 1e-9));
  for (std::size_t i = 1; i <= n_full; ++i) grid.nodes.push_back(static_cast<double>(i) * dt);
  if (grid.nodes.back() < t_end - 1e-12 * t_end) {
    grid.nodes.push_back(t_end);
  } else {
    grid.nodes.back() = t_end;
  }
  return grid;
}

Trajectory integrate_skeleton(const ModelSpec& model, const Vec& x0, const TimeGrid& grid) {
  if (x0.size() != model.dim) throw invalid_argument("integrate_skeleton: x0 dimension mismatch");
  grid.validate();
  const Vec f0 = model.F(Vec::Zero(model.dim));
  Trajectory traj;
  traj.grid = grid;
  traj.states.reserve(grid.size());
  traj.states.push_back(x0);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double dt = grid.nodes[i + 1] - grid.nodes[i];
    const Vec drift = model.V(traj.states[i]) - f0;
    Vec next = traj.states[i] + dt * drift;
    guard(next, i + 1, "integrate_skeleton");
    traj.states.push_back(std::move(next));
  }
  return traj;
}

Trajectory integrate_flow(const ModelSpec& model, const Vec& anchor, const Vec& x0,
                          double t_end, double dt) {
  if (x0.size() != model.dim || anchor.size() != model.dim) {
    throw invalid_argument("integrate_flow: dimension mismatch");
  }
  auto rhs = [&](const Vec& x) -> Vec { return model.V(x) - model.F(x - anchor); };
  Trajectory traj;
  traj.grid = make_uniform_grid(t_end, dt);
  traj.states.reserve(traj.grid.size());
  traj.states.push_back(x0);
  for (std::size_t i = 0; i + 1 < traj.grid.size(); ++i) {
    const double h = traj.grid.nodes[i + 1] - traj.grid.nodes[i];
    const Vec& x = traj.states[i];
    const Vec k1 = rhs(x);
    const Vec k2 = rhs(x + 0.5 * h * k1);
    const Vec k3 = rhs(x + 0.5 * h * k2);
    const Vec k4 = rhs(x + h * k3);
    Vec next = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    guard(next, i + 1, "integrate_flow");
    traj.states.push_back(std::move(next));
  }
  return traj;
}

std::vector<SeedFlow> equipotential_field(const ModelSpec& model, const Vec& anchor,
                                          const std::vector<Vec>& seeds, double t_end,
                                          double dt) {
  if (seeds.empty()) throw invalid_argument("equipotential_field: seeds must be non-empty");
  std::vector<SeedFlow> out;
  out.reserve(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    SeedFlow sf;
    sf.seed_index = i;
    try {
      sf.trajectory = integrate_flow(model, anchor, seeds[i], t_end, dt);
    } catch (const std::exception& e) {
      sf.ok = false;
      sf.error = "seed " + std::to_string(i) + ": " + e.what();
    }
    out.push_back(std::move(sf));
  }
  return out;
}

}  // namespace mvmam
