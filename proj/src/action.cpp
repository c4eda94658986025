#include "mvmam/action.hpp"

namespace mvmam {

namespace {

void check_shared_grid(const Trajectory& path, const Trajectory& skeleton) {
  if (path.grid.nodes != skeleton.grid.nodes) {
    throw invalid_argument("action: path and skeleton must share the same time grid");
  }
  if (path.states.size() != path.grid.size() || skeleton.states.size() != skeleton.grid.size()) {
    throw invalid_argument("action: state count must match grid node count");
  }
}

}  // namespace

double action(const ModelSpec& model, const Trajectory& path, const Trajectory& skeleton) {
  check_shared_grid(path, skeleton);
  const std::size_t n_seg = path.grid.size() - 1;
  std::vector<double> contrib(n_seg);
  for (std::size_t i = 0; i < n_seg; ++i) {
    const double dt = path.grid.nodes[i + 1] - path.grid.nodes[i];
    const Vec v = (path.states[i + 1] - path.states[i]) / dt;
    const Vec mid_phi = 0.5 * (path.states[i] + path.states[i + 1]);
    const Vec mid_eta = 0.5 * (skeleton.states[i] + skeleton.states[i + 1]);
    const Vec r = v - eval_b(model, mid_phi, mid_eta);
    contrib[i] = 0.5 * dt * r.squaredNorm();
  }
  return pairwise_sum(contrib);
}

std::vector<Vec> action_gradient_fd(const ModelSpec& model, const Trajectory& path,
                                    const Trajectory& skeleton, double h) {
  check_shared_grid(path, skeleton);
  if (!(h > 0.0)) throw invalid_argument("action_gradient_fd: h must be positive");
  const std::size_t n = path.grid.size();
  std::vector<Vec> grad(n, Vec::Zero(model.dim));
  Trajectory probe = path;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    for (int c = 0; c < model.dim; ++c) {
      const double keep = probe.states[i](c);
      probe.states[i](c) = keep + h;
      const double up = action(model, probe, skeleton);
      probe.states[i](c) = keep - h;
      const double down = action(model, probe, skeleton);
      probe.states[i](c) = keep;
      grad[i](c) = (up - down) / (2.0 * h);
    }
  }
  return grad;
}

}  // namespace mvmam
