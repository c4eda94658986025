#include "mvmam/particles.hpp"

#include <cmath>

#include "mvmam/rng.hpp"

namespace mvmam {

namespace {
constexpr double kBlowupNorm = 1e8;
}

void SimConfig::validate() const {
  if (n_particles < 1) throw invalid_argument("SimConfig: n_particles >= 1 required");
  if (!(dt > 0.0)) throw invalid_argument("SimConfig: dt > 0 required");
  if (!(t_end >= dt)) throw invalid_argument("SimConfig: t_end >= dt required");
  if (epsilon < 0.0) throw invalid_argument("SimConfig: epsilon >= 0 required");
  if (n_paths < 1) throw invalid_argument("SimConfig: n_paths >= 1 required");
}

std::vector<EnsembleState> simulate_particles(const ModelSpec& model, const SimConfig& cfg,
                                              int record_stride,
                                              std::span<const std::uint64_t> substreams) {
  cfg.validate();
  if (record_stride < 1) throw invalid_argument("simulate_particles: record_stride >= 1");
  if (!substreams.empty() && substreams.size() != static_cast<std::size_t>(cfg.n_particles)) {
    throw invalid_argument("simulate_particles: substream count must equal n_particles");
  }

  const int n = cfg.n_particles;
  const int dim = model.dim;
  const TimeGrid grid = make_uniform_grid(cfg.t_end, cfg.dt);
  const NoiseSource noise(cfg.seed);

  std::vector<Vec> x(n, model.anchor_x1);
  std::vector<EnsembleState> snapshots;
  snapshots.push_back({0.0, x});

  std::vector<Vec> drift(n, Vec(dim));
  std::vector<double> sum_buf(n);
  for (std::size_t step = 0; step + 1 < grid.size(); ++step) {
    const double dt = grid.nodes[step + 1] - grid.nodes[step];
    const double noise_scale = std::sqrt(cfg.epsilon * dt);

    for (int i = 0; i < n; ++i) {
      // exact mean-field sum, fixed index order, pairwise-summed per coordinate
      Vec mean_field = Vec::Zero(dim);
      if (n > 1) {
        std::vector<std::vector<double>> comps(dim, std::vector<double>(n));
        for (int j = 0; j < n; ++j) {
          const Vec f = model.F(x[i] - x[j]);
          for (int c = 0; c < dim; ++c) comps[c][j] = f(c);
        }
        for (int c = 0; c < dim; ++c) mean_field(c) = pairwise_sum(comps[c]) / n;
      } else {
        mean_field = model.F(Vec::Zero(dim)) / n;
      }
      drift[i] = model.V(x[i]) - mean_field;
    }
    for (int i = 0; i < n; ++i) {
      const std::uint64_t sub = substreams.empty() ? static_cast<std::uint64_t>(i) : substreams[i];
      x[i] += dt * drift[i];
      if (noise_scale > 0.0) x[i] += noise_scale * noise.gaussians(sub, step, dim);
      if (!x[i].allFinite() || x[i].cwiseAbs().maxCoeff() > kBlowupNorm) {
        throw numerical_error("simulate_particles: blowup at step " + std::to_string(step + 1) +
                              ", particle " + std::to_string(i));
      }
    }
    const std::size_t k = step + 1;
    if (k % static_cast<std::size_t>(record_stride) == 0 || k + 1 == grid.size()) {
      snapshots.push_back({grid.nodes[k], x});
    }
  }
  return snapshots;
}

std::vector<Trajectory> simulate_corresponding_sde(const ModelSpec& model,
                                                   const Trajectory& skeleton,
                                                   const SimConfig& cfg) {
  cfg.validate();
  const TimeGrid grid = make_uniform_grid(cfg.t_end, cfg.dt);
  if (skeleton.grid.nodes.size() != grid.nodes.size()) {
    throw invalid_argument("simulate_corresponding_sde: skeleton grid does not match the "
                           "simulation grid (integrate it on make_uniform_grid(t_end, dt))");
  }
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    if (std::abs(skeleton.grid.nodes[i] - grid.nodes[i]) > 1e-12 * std::max(1.0, cfg.t_end)) {
      throw invalid_argument("simulate_corresponding_sde: skeleton grid mismatch at node " +
                             std::to_string(i));
    }
  }

  const int dim = model.dim;
  const NoiseSource noise(cfg.seed);
  std::vector<Trajectory> paths(cfg.n_paths);
  for (int p = 0; p < cfg.n_paths; ++p) {
    Trajectory traj;
    traj.grid = grid;
    traj.states.reserve(grid.size());
    traj.states.push_back(model.anchor_x1);
    for (std::size_t step = 0; step + 1 < grid.size(); ++step) {
      const double dt = grid.nodes[step + 1] - grid.nodes[step];
      const Vec& z = traj.states[step];
      Vec next = z + dt * (model.V(z) - model.F(z - skeleton.states[step]));
      if (cfg.epsilon > 0.0) {
        next += std::sqrt(cfg.epsilon * dt) *
                noise.gaussians(static_cast<std::uint64_t>(p), step, dim);
      }
      if (!next.allFinite() || next.cwiseAbs().maxCoeff() > kBlowupNorm) {
        throw numerical_error("simulate_corresponding_sde: blowup at step " +
                              std::to_string(step + 1) + ", path " + std::to_string(p));
      }
      traj.states.push_back(std::move(next));
    }
    paths[p] = std::move(traj);
  }
  return paths;
}

TransitionStats empirical_transition_stats(const std::vector<Trajectory>& trajectories,
                                           const Vec& target, double radius) {
  if (trajectories.empty()) {
    throw invalid_argument("empirical_transition_stats: empty trajectory list");
  }
  if (!(radius > 0.0)) throw invalid_argument("empirical_transition_stats: radius > 0");

  std::size_t hits = 0;
  std::vector<double> hit_times;
  for (const auto& traj : trajectories) {
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
      if ((traj.states[i] - target).norm() <= radius) {
        ++hits;
        hit_times.push_back(traj.grid.nodes[i]);
        break;
      }
    }
  }
  TransitionStats stats;
  stats.hit_fraction = static_cast<double>(hits) / trajectories.size();
  if (hits > 0) stats.mean_hit_time = pairwise_sum(hit_times) / hits;
  return stats;
}

}  // namespace mvmam
