#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mvmam/skeleton.hpp"

namespace mvmam {

struct SimConfig {
  int n_particles = 1;
  double epsilon = 0.0;  // noise intensity, >= 0
  double dt = 1e-3;
  double t_end = 1.0;
  std::uint64_t seed = 0;
  int n_paths = 1;  // replication count for single-particle SDEs

  void validate() const;
};

struct EnsembleState {
  double time = 0.0;
  std::vector<Vec> positions;
};

/// Euler-Maruyama simulation of the N-particle system
///   dX_i = V(X_i) dt - (1/N) sum_j F(X_i - X_j) dt + sqrt(eps) dB_i,
/// all particles starting at the model anchor x1. The mean-field sum is the
/// exact O(N^2) pairwise-summed value in fixed index order; each particle's
/// noise substream equals its index so results do not depend on N ordering or
/// scheduling. Snapshots are recorded every record_stride steps (the initial
/// and final states always included). `substreams`, when given, reassigns the
/// noise substream per particle; it exists for exchangeability tests.
std::vector<EnsembleState> simulate_particles(const ModelSpec& model, const SimConfig& cfg,
                                              int record_stride,
                                              std::span<const std::uint64_t> substreams = {});

/// cfg.n_paths independent Euler-Maruyama trajectories of the corresponding
/// SDE dZ = (V(Z) - F(Z - eta(t))) dt + sqrt(eps) dB, Z(0) = x1, with eta
/// read off the skeleton trajectory. The skeleton grid must equal the
/// simulation grid (build both with make_uniform_grid(t_end, dt)).
std::vector<Trajectory> simulate_corresponding_sde(const ModelSpec& model,
                                                   const Trajectory& skeleton,
                                                   const SimConfig& cfg);

struct TransitionStats {
  double hit_fraction = 0.0;
  std::optional<double> mean_hit_time;
};

/// Fraction of trajectories entering the ball B(target, radius) and the mean
/// first-hit time among those that do.
TransitionStats empirical_transition_stats(const std::vector<Trajectory>& trajectories,
                                           const Vec& target, double radius);

}  // namespace mvmam
