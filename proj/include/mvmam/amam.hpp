#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mvmam/action.hpp"
#include "mvmam/skeleton.hpp"

namespace mvmam {

/// The solver unknown: states on the uniform alpha-grid 0, 1/N, ..., 1 with
/// the physical times attached per node. Endpoints stay pinned to the model's
/// x1 and x2 after every iteration.
struct DiscretePath {
  std::vector<double> times;  // N+1 nodes, times[0] = 0, times[N] = T
  std::vector<Vec> states;    // N+1 states

  int n_cells() const { return static_cast<int>(times.size()) - 1; }
  double horizon() const { return times.back(); }
  Trajectory as_trajectory() const;
  void validate(int dim) const;
};

/// Monitor values per node (floored, normalized), the normalizer C and the
/// per-cell measures dalpha (summing to 1).
struct MeshWeights {
  std::vector<double> w;
  double C = 0.0;
  std::vector<double> dalpha;
};

enum class InterpMode { linear, cubic };

struct SolverConfig {
  int N = 200;
  int K = 5000;
  double T = 20.0;
  /// Pseudo-time step. Not set: adaptive (grown while the action decreases,
  /// halved when a step would raise it). Set: used as the fixed cap.
  std::optional<double> dtau;
  double r = 1.0;           // monitor exponent
  double theta = 0.01;      // monitor floor fraction
  double tol_residual = 1e-6;
  double tol_action = 1e-10;
  InterpMode interp = InterpMode::linear;
  double fd_step = 1e-6;

  void validate() const;
};

struct SolveReport {
  DiscretePath path;
  double action_value = 0.0;
  std::vector<double> action_history;
  std::vector<double> residual_history;  // per-iteration max displacement / dtau
  int iterations = 0;
  bool converged = false;
  /// max deviation of per-cell monitor mass from 1/N, over performed remeshes
  double max_equidistribution_error = 0.0;
  /// sup norm of el_residual on the final path
  double final_sup_residual = 0.0;
};

struct QuasiPotentialRow {
  double T = 0.0;
  double min_action = 0.0;
  bool converged = false;
  std::string error;  // non-empty when this row failed
};

struct QuasiPotentialTable {
  std::vector<QuasiPotentialRow> rows;
  double quasi_potential = 0.0;  // running minimum over successful rows
  DiscretePath best_path;
};

/// Monitor weights |b(phi_i, eta_i)|^r floored at theta * max_j raw_j and
/// normalized by C = sum_i dt_i * (floored midpoint value); dalpha_i is the
/// per-cell monitor mass. All raw weights zero yields uniform weights.
MeshWeights monitor(const ModelSpec& model, const DiscretePath& path,
                    const Trajectory& skeleton, double r, double theta);

/// Interpolate values sampled at alpha_old onto alpha_new (both in [0, 1],
/// alpha_old strictly increasing). Endpoint queries return the input
/// endpoints verbatim.
std::vector<double> remesh(const std::vector<double>& alpha_old,
                           const std::vector<double>& values,
                           const std::vector<double>& alpha_new, InterpMode mode);
std::vector<Vec> remesh(const std::vector<double>& alpha_old, const std::vector<Vec>& values,
                        const std::vector<double>& alpha_new, InterpMode mode);

/// Discrete Euler-Lagrange residual per node: the (sign-flipped) gradient of
/// the midpoint-rule action with respect to node j, scaled by the node's time
/// measure (dt_{j-1} + dt_j)/2. Central second differences of the chord
/// velocities make this the discrete form of
///   phi_tt - grad_x b phi_t + (grad_x b)^T (phi_t - b) - grad_y b b(eta,eta),
/// and it matches action_gradient_fd by construction. Endpoints are zero.
std::vector<Vec> el_residual(const ModelSpec& model, const DiscretePath& path,
                             const Trajectory& skeleton);

/// Solve a tridiagonal system in place (Thomas algorithm). lower[i], diag[i],
/// upper[i] describe row i; lower[0] and upper[n-1] are ignored.
std::vector<double> thomas_solve(const std::vector<double>& lower,
                                 const std::vector<double>& diag,
                                 const std::vector<double>& upper,
                                 const std::vector<double>& rhs);

/// One plain iteration of the adaptive scheme: recompute weights, remesh to
/// the uniform alpha-grid, regenerate the skeleton on the new time grid, and
/// take one semi-implicit update (implicit in the w^2 second-difference term,
/// explicit in the rest) of pseudo-time step dtau.
DiscretePath amam_step(const ModelSpec& model, const DiscretePath& path,
                       const SolverConfig& config, double dtau);

/// Full solve: iterate up to K times with monotone step control, stopping
/// early when max-displacement/dtau < tol_residual or the action change
/// between iterations falls below tol_action.
SolveReport solve_mlp(const ModelSpec& model, const SolverConfig& config,
                      const DiscretePath& initial_path);

/// Minimize over horizons: one solve per T (warm-started from the previous
/// path rescaled in time); the running minimum estimates the quasi-potential.
QuasiPotentialTable quasi_potential_scan(const ModelSpec& model,
                                         const SolverConfig& base_config,
                                         const std::vector<double>& T_list,
                                         const DiscretePath& initial_path);

}  // namespace mvmam
