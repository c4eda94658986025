#include "mvmam/amam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mvmam/log.hpp"

namespace mvmam {

namespace {

// Step-control constants for the default (adaptive) pseudo-time stepping.
constexpr double kDtauInit = 1e-3;
constexpr double kDtauCap = 0.2;
constexpr double kDtauGrowth = 1.05;
constexpr double kMomentumBeta = 0.9;
constexpr double kRemeshTol = 5e-3;  // remesh when cell mass deviates > 0.5 %
constexpr int kMaxHalvings = 30;
constexpr int kMaxRemeshPasses = 40;

Trajectory skeleton_on(const ModelSpec& model, const std::vector<double>& times) {
  TimeGrid grid;
  grid.nodes = times;
  return integrate_skeleton(model, model.anchor_x1, grid);
}

double max_abs_dev(const std::vector<double>& dalpha) {
  const double n = static_cast<double>(dalpha.size());
  double dev = 0.0;
  for (double da : dalpha) dev = std::max(dev, std::abs(da * n - 1.0));
  return dev;
}

}  // namespace

Trajectory DiscretePath::as_trajectory() const {
  Trajectory traj;
  traj.grid.nodes = times;
  traj.states = states;
  return traj;
}

void DiscretePath::validate(int dim) const {
  if (times.size() < 2 || times.size() != states.size()) {
    throw invalid_argument("DiscretePath: need N+1 times and states");
  }
  if (times.front() != 0.0) throw invalid_argument("DiscretePath: times[0] must be 0");
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    if (!(times[i] < times[i + 1])) {
      throw invalid_argument("DiscretePath: times must be strictly increasing");
    }
  }
  for (const auto& s : states) {
    if (s.size() != dim || !s.allFinite()) {
      throw invalid_argument("DiscretePath: states must be finite with the model dimension");
    }
  }
}

void SolverConfig::validate() const {
  if (N < 4) throw invalid_argument("SolverConfig: N >= 4 required");
  if (K < 1) throw invalid_argument("SolverConfig: K >= 1 required");
  if (!(T > 0.0)) throw invalid_argument("SolverConfig: T > 0 required");
  if (dtau && !(*dtau > 0.0)) throw invalid_argument("SolverConfig: dtau > 0 required");
  if (!(r > 0.0)) throw invalid_argument("SolverConfig: r > 0 required");
  if (!(theta > 0.0 && theta < 1.0)) throw invalid_argument("SolverConfig: 0 < theta < 1 required");
  if (!(tol_residual > 0.0) || !(tol_action > 0.0)) {
    throw invalid_argument("SolverConfig: tolerances must be positive");
  }
  if (!(fd_step > 0.0)) throw invalid_argument("SolverConfig: fd_step > 0 required");
}

MeshWeights monitor(const ModelSpec& model, const DiscretePath& path,
                    const Trajectory& skeleton, double r, double theta) {
  if (path.times != skeleton.grid.nodes) {
    throw invalid_argument("monitor: path and skeleton must share the time grid");
  }
  const std::size_t n_nodes = path.states.size();
  const std::size_t n_seg = n_nodes - 1;

  std::vector<double> raw(n_nodes), mid_raw(n_seg);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    raw[i] = std::pow(eval_b(model, path.states[i], skeleton.states[i]).norm(), r);
  }
  for (std::size_t i = 0; i < n_seg; ++i) {
    const Vec mp = 0.5 * (path.states[i] + path.states[i + 1]);
    const Vec me = 0.5 * (skeleton.states[i] + skeleton.states[i + 1]);
    mid_raw[i] = std::pow(eval_b(model, mp, me).norm(), r);
  }

  const double peak = *std::max_element(raw.begin(), raw.end());
  MeshWeights mw;
  mw.w.resize(n_nodes);
  mw.dalpha.resize(n_seg);
  std::vector<double> mid_floored(n_seg);
  if (peak == 0.0) {
    std::fill(raw.begin(), raw.end(), 1.0);
    std::fill(mid_floored.begin(), mid_floored.end(), 1.0);
  } else {
    const double floor_val = theta * peak;
    for (auto& x : raw) x = std::max(x, floor_val);
    for (std::size_t i = 0; i < n_seg; ++i) mid_floored[i] = std::max(mid_raw[i], floor_val);
  }

  std::vector<double> cell_mass(n_seg);
  for (std::size_t i = 0; i < n_seg; ++i) {
    cell_mass[i] = (path.times[i + 1] - path.times[i]) * mid_floored[i];
  }
  mw.C = pairwise_sum(cell_mass);
  for (std::size_t i = 0; i < n_nodes; ++i) mw.w[i] = raw[i] / mw.C;
  for (std::size_t i = 0; i < n_seg; ++i) mw.dalpha[i] = cell_mass[i] / mw.C;
  return mw;
}

namespace {

void check_remesh_grids(const std::vector<double>& alpha_old, std::size_t n_values,
                        const std::vector<double>& alpha_new) {
  if (alpha_old.size() != n_values) {
    throw invalid_argument("remesh: alpha/value count mismatch");
  }
  if (alpha_old.size() < 2 || alpha_new.size() < 2) {
    throw invalid_argument("remesh: need at least two nodes");
  }
  for (std::size_t i = 0; i + 1 < alpha_old.size(); ++i) {
    if (!(alpha_old[i] < alpha_old[i + 1])) {
      throw invalid_argument("remesh: alpha_old must be strictly increasing");
    }
  }
}

// Fritsch-Carlson monotone cubic slopes (the PCHIP rule).
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> h(n - 1), d(n - 1), m(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    d[i] = (y[i + 1] - y[i]) / h[i];
  }
  if (n == 2) {
    m[0] = m[1] = d[0];
    return m;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (d[i - 1] * d[i] <= 0.0) {
      m[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
    }
  }
  auto edge = [](double h0, double h1, double d0, double d1) {
    double m0 = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (m0 * d0 <= 0.0) {
      m0 = 0.0;
    } else if (d0 * d1 <= 0.0 && std::abs(m0) > 3.0 * std::abs(d0)) {
      m0 = 3.0 * d0;
    }
    return m0;
  };
  m[0] = edge(h[0], h[1], d[0], d[1]);
  m[n - 1] = edge(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
  return m;
}

std::vector<double> interp_core(const std::vector<double>& xs, const std::vector<double>& ys,
                                const std::vector<double>& xq, InterpMode mode) {
  std::vector<double> out(xq.size());
  std::vector<double> slopes;
  if (mode == InterpMode::cubic) slopes = pchip_slopes(xs, ys);
  std::size_t seg = 0;
  for (std::size_t q = 0; q < xq.size(); ++q) {
    const double a = xq[q];
    if (a <= xs.front()) {
      out[q] = ys.front();
      continue;
    }
    if (a >= xs.back()) {
      out[q] = ys.back();
      continue;
    }
    while (seg + 2 < xs.size() && xs[seg + 1] <= a) ++seg;
    const double h = xs[seg + 1] - xs[seg];
    const double t = (a - xs[seg]) / h;
    if (mode == InterpMode::linear) {
      out[q] = ys[seg] + t * (ys[seg + 1] - ys[seg]);
    } else {
      const double t2 = t * t, t3 = t2 * t;
      const double h00 = 2 * t3 - 3 * t2 + 1;
      const double h10 = t3 - 2 * t2 + t;
      const double h01 = -2 * t3 + 3 * t2;
      const double h11 = t3 - t2;
      out[q] = h00 * ys[seg] + h10 * h * slopes[seg] + h01 * ys[seg + 1] +
               h11 * h * slopes[seg + 1];
    }
  }
  return out;
}

}  // namespace

std::vector<double> remesh(const std::vector<double>& alpha_old,
                           const std::vector<double>& values,
                           const std::vector<double>& alpha_new, InterpMode mode) {
  check_remesh_grids(alpha_old, values.size(), alpha_new);
  return interp_core(alpha_old, values, alpha_new, mode);
}

std::vector<Vec> remesh(const std::vector<double>& alpha_old, const std::vector<Vec>& values,
                        const std::vector<double>& alpha_new, InterpMode mode) {
  check_remesh_grids(alpha_old, values.size(), alpha_new);
  const auto dim = values.front().size();
  std::vector<std::vector<double>> comps(dim, std::vector<double>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (Eigen::Index c = 0; c < dim; ++c) comps[c][i] = values[i](c);
  }
  std::vector<Vec> out(alpha_new.size(), Vec(dim));
  for (Eigen::Index c = 0; c < dim; ++c) {
    const auto col = interp_core(alpha_old, comps[c], alpha_new, mode);
    for (std::size_t q = 0; q < alpha_new.size(); ++q) out[q](c) = col[q];
  }
  // endpoint preservation, bitwise
  out.front() = values.front();
  out.back() = values.back();
  return out;
}

std::vector<Vec> el_residual(const ModelSpec& model, const DiscretePath& path,
                             const Trajectory& skeleton) {
  if (path.times != skeleton.grid.nodes) {
    throw invalid_argument("el_residual: path and skeleton must share the time grid");
  }
  const std::size_t n_nodes = path.states.size();
  const std::size_t n_seg = n_nodes - 1;
  std::vector<Vec> r(n_seg);
  std::vector<Vec> jtr(n_seg);  // dt_i * Jx_i^T r_i
  for (std::size_t i = 0; i < n_seg; ++i) {
    const double dt = path.times[i + 1] - path.times[i];
    const Vec mp = 0.5 * (path.states[i] + path.states[i + 1]);
    const Vec me = 0.5 * (skeleton.states[i] + skeleton.states[i + 1]);
    const Vec v = (path.states[i + 1] - path.states[i]) / dt;
    r[i] = v - eval_b(model, mp, me);
    jtr[i] = dt * (jac_b_x(model, mp, me).transpose() * r[i]);
  }
  std::vector<Vec> res(n_nodes, Vec::Zero(model.dim));
  for (std::size_t j = 1; j < n_seg; ++j) {
    const double ds = 0.5 * (path.times[j + 1] - path.times[j - 1]);
    const Vec grad_j = (r[j - 1] - r[j]) - 0.5 * (jtr[j - 1] + jtr[j]);
    res[j] = -grad_j / ds;
  }
  return res;
}

std::vector<double> thomas_solve(const std::vector<double>& lower,
                                 const std::vector<double>& diag,
                                 const std::vector<double>& upper,
                                 const std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n || n == 0) {
    throw invalid_argument("thomas_solve: inconsistent sizes");
  }
  std::vector<double> cp(n), x(n);
  if (diag[0] == 0.0) throw numerical_error("thomas_solve: zero pivot at row 0");
  cp[0] = upper[0] / diag[0];
  x[0] = rhs[0] / diag[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double den = diag[i] - lower[i] * cp[i - 1];
    if (den == 0.0) {
      throw numerical_error("thomas_solve: zero pivot at row " + std::to_string(i));
    }
    cp[i] = upper[i] / den;
    x[i] = (rhs[i] - lower[i] * x[i - 1]) / den;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= cp[i] * x[i + 1];
  return x;
}

namespace {

struct SolverState {
  DiscretePath path;
  Trajectory eta;
  std::vector<Vec> momentum;
};

// Steps 1-4: recompute weights, resample (alpha, t) and (alpha, phi) onto the
// uniform alpha grid, regenerate eta by Euler on the new time grid. Iterated
// until the post-remesh cell masses are equidistributed within tol.
// Returns the deviation after the final pass.
double remesh_state(const ModelSpec& model, const SolverConfig& cfg, SolverState& st,
                    MeshWeights& mw, double target) {
  const int N = st.path.n_cells();
  std::vector<double> alpha_new(N + 1);
  for (int i = 0; i <= N; ++i) alpha_new[i] = static_cast<double>(i) / N;

  double dev = max_abs_dev(mw.dalpha);
  double prev_dev = std::numeric_limits<double>::infinity();
  for (int pass = 0; pass < kMaxRemeshPasses && dev > target && dev < 0.9 * prev_dev; ++pass) {
    prev_dev = dev;
    std::vector<double> alpha_old(N + 1);
    alpha_old[0] = 0.0;
    for (int i = 0; i < N; ++i) alpha_old[i + 1] = alpha_old[i] + mw.dalpha[i];
    alpha_old[N] = 1.0;

    const double T = st.path.horizon();
    auto new_times = remesh(alpha_old, st.path.times, alpha_new, cfg.interp);
    new_times.front() = 0.0;
    new_times.back() = T;
    auto new_states = remesh(alpha_old, st.path.states, alpha_new, cfg.interp);
    new_states.front() = model.anchor_x1;
    new_states.back() = model.target_x2;
    auto new_momentum = remesh(alpha_old, st.momentum, alpha_new, cfg.interp);
    new_momentum.front().setZero();
    new_momentum.back().setZero();

    st.path.times = std::move(new_times);
    st.path.states = std::move(new_states);
    st.momentum = std::move(new_momentum);
    st.eta = skeleton_on(model, st.path.times);
    mw = monitor(model, st.path, st.eta, cfg.r, cfg.theta);
    dev = max_abs_dev(mw.dalpha);
  }
  return dev;
}

// Step 5: semi-implicit update. The right-hand side carries the exact
// gradient of the discrete action (as el_residual), minus the explicit copy
// of the stiff second-difference term which moves to the implicit side:
//   (phi_new - phi)/dtau = w^2 D2 phi_new / dalpha^2 + [R - w^2 D2 phi / dalpha^2]
// One tridiagonal solve per coordinate; endpoints pinned.
std::vector<Vec> semi_implicit_update(const ModelSpec& model, const SolverState& st,
                                      const MeshWeights& mw, const std::vector<Vec>& residual,
                                      double dtau) {
  const int N = st.path.n_cells();
  const int dim = model.dim;
  const double inv_da2 = static_cast<double>(N) * static_cast<double>(N);
  const int m = N - 1;  // interior nodes

  std::vector<double> lower(m), diag(m), upper(m);
  for (int i = 1; i <= m; ++i) {
    const double lam = dtau * mw.w[i] * mw.w[i] * inv_da2;
    lower[i - 1] = -lam;
    diag[i - 1] = 1.0 + 2.0 * lam;
    upper[i - 1] = -lam;
  }

  std::vector<Vec> out = st.path.states;
  std::vector<double> rhs(m);
  for (int c = 0; c < dim; ++c) {
    for (int i = 1; i <= m; ++i) {
      const double lam = dtau * mw.w[i] * mw.w[i] * inv_da2;
      const double d2 =
          st.path.states[i + 1](c) - 2.0 * st.path.states[i](c) + st.path.states[i - 1](c);
      rhs[i - 1] = st.path.states[i](c) + dtau * residual[i](c) - lam * d2;
    }
    rhs[0] += -lower[0] * model.anchor_x1(c);
    rhs[m - 1] += -upper[m - 1] * model.target_x2(c);
    const auto sol = thomas_solve(lower, diag, upper, rhs);
    for (int i = 1; i <= m; ++i) out[i](c) = sol[i - 1];
  }
  return out;
}

double path_action(const ModelSpec& model, const SolverState& st) {
  return action(model, st.path.as_trajectory(), st.eta);
}

double max_displacement(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  double disp = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    disp = std::max(disp, (a[i] - b[i]).cwiseAbs().maxCoeff());
  }
  return disp;
}

}  // namespace

DiscretePath amam_step(const ModelSpec& model, const DiscretePath& path,
                       const SolverConfig& config, double dtau) {
  config.validate();
  path.validate(model.dim);
  if (!(dtau > 0.0)) throw invalid_argument("amam_step: dtau must be positive");

  SolverState st;
  st.path = path;
  st.eta = skeleton_on(model, st.path.times);
  st.momentum.assign(st.path.states.size(), Vec::Zero(model.dim));
  MeshWeights mw = monitor(model, st.path, st.eta, config.r, config.theta);
  remesh_state(model, config, st, mw, 0.0);  // unconditional single-pass remesh
  const auto residual = el_residual(model, st.path, st.eta);
  auto updated = semi_implicit_update(model, st, mw, residual, dtau);
  for (const auto& s : updated) {
    if (!s.allFinite()) throw numerical_error("amam_step: non-finite update");
  }
  st.path.states = std::move(updated);
  return st.path;
}

SolveReport solve_mlp(const ModelSpec& model, const SolverConfig& config,
                      const DiscretePath& initial_path) {
  config.validate();
  initial_path.validate(model.dim);
  if (initial_path.n_cells() != config.N) {
    throw invalid_argument("solve_mlp: initial path must have config.N cells");
  }
  if (std::abs(initial_path.horizon() - config.T) > 1e-9 * std::max(1.0, config.T)) {
    throw invalid_argument("solve_mlp: initial path horizon must equal config.T");
  }
  if ((initial_path.states.front() - model.anchor_x1).norm() > 1e-9 ||
      (initial_path.states.back() - model.target_x2).norm() > 1e-9) {
    throw invalid_argument("solve_mlp: initial path endpoints must equal (x1, x2)");
  }

  SolveReport report;
  SolverState st;
  st.path = initial_path;
  st.path.states.front() = model.anchor_x1;
  st.path.states.back() = model.target_x2;
  st.path.times.front() = 0.0;
  st.path.times.back() = config.T;
  st.eta = skeleton_on(model, st.path.times);
  st.momentum.assign(st.path.states.size(), Vec::Zero(model.dim));

  // Degenerate endpoints: keep the constant path (accepted by design).
  if (model.anchor_x1 == model.target_x2) {
    report.path = st.path;
    report.action_value = path_action(model, st);
    report.converged = true;
    report.iterations = 0;
    report.final_sup_residual = 0.0;
    return report;
  }

  double recorded_action = path_action(model, st);
  double dtau = config.dtau ? *config.dtau : kDtauInit;
  const double dtau_cap = config.dtau ? *config.dtau : kDtauCap;

  for (int k = 0; k < config.K; ++k) {
    dtau = std::min(dtau * kDtauGrowth, dtau_cap);

    MeshWeights mw = monitor(model, st.path, st.eta, config.r, config.theta);
    SolverState saved;
    bool have_snapshot = false;
    if (max_abs_dev(mw.dalpha) > kRemeshTol) {
      saved = st;
      have_snapshot = true;
      const double dev = remesh_state(model, config, st, mw, kRemeshTol);
      report.max_equidistribution_error = std::max(report.max_equidistribution_error, dev);
    }

    bool accepted = false;
    bool halved_in_accepted_phase = false;
    double dtau_used = dtau;
    SolverState next;
    double next_action = 0.0;

    for (int phase = 0; phase < 2 && !accepted; ++phase) {
      if (phase == 1) {
        if (!have_snapshot) break;
        st = std::move(saved);  // defer the remesh: its action bump was unrecoverable
        have_snapshot = false;
        mw = monitor(model, st.path, st.eta, config.r, config.theta);
      }
      const double base_action = path_action(model, st);
      const double target =
          std::min(base_action, recorded_action) + 1e-12 * std::max(1.0, std::abs(recorded_action));
      const auto residual = el_residual(model, st.path, st.eta);
      double try_dtau = dtau;
      bool halved = false;
      for (int att = 0; att < kMaxHalvings; ++att) {
        auto base = semi_implicit_update(model, st, mw, residual, try_dtau);
        bool base_ok = true;
        for (const auto& s : base) base_ok = base_ok && s.allFinite();

        if (base_ok) {
          // momentum candidate first: accepted only while it keeps descending
          bool mom_nonzero = false;
          for (const auto& mv : st.momentum) mom_nonzero = mom_nonzero || mv.squaredNorm() > 0.0;
          if (mom_nonzero) {
            SolverState cand = st;
            cand.path.states = base;
            for (std::size_t i = 1; i + 1 < cand.path.states.size(); ++i) {
              cand.path.states[i] += kMomentumBeta * st.momentum[i];
            }
            bool cand_ok = true;
            for (const auto& s : cand.path.states) cand_ok = cand_ok && s.allFinite();
            if (cand_ok) {
              const double a_cand = path_action(model, cand);
              if (a_cand <= target) {
                next = std::move(cand);
                next_action = a_cand;
                accepted = true;
              }
            }
          }
          if (!accepted) {
            SolverState cand = st;
            cand.path.states = std::move(base);
            const double a_base = path_action(model, cand);
            if (a_base <= target) {
              next = std::move(cand);
              next_action = a_base;
              for (auto& mv : next.momentum) mv.setZero();
              accepted = true;
            }
          }
        }
        if (accepted) {
          dtau_used = try_dtau;
          halved_in_accepted_phase = halved;
          break;
        }
        try_dtau *= 0.5;
        halved = true;
        if (try_dtau < 1e-13) break;
      }
    }

    double disp;
    if (accepted) {
      disp = max_displacement(next.path.states, st.path.states);
      for (std::size_t i = 0; i < st.momentum.size(); ++i) {
        next.momentum[i] = next.path.states[i] - st.path.states[i];
      }
      dtau = dtau_used;
      st = std::move(next);
    } else {
      // Cannot descend at any step size: stationary to rounding.
      disp = 0.0;
      next_action = path_action(model, st);
      for (auto& mv : st.momentum) mv.setZero();
    }

    report.action_history.push_back(next_action);
    report.residual_history.push_back(disp / dtau_used);
    report.iterations = k + 1;

    const double action_change = std::abs(next_action - recorded_action);
    recorded_action = next_action;
    if (disp / dtau_used < config.tol_residual ||
        (!halved_in_accepted_phase && action_change < config.tol_action)) {
      report.converged = true;
      break;
    }
    if ((k + 1) % 1000 == 0) {
      log::info("solve_mlp: iter " + std::to_string(k + 1) + " action " +
                std::to_string(next_action) + " dtau " + std::to_string(dtau));
    }
  }

  report.path = st.path;
  report.action_value = path_action(model, st);
  double sup = 0.0;
  for (const auto& rv : el_residual(model, st.path, st.eta)) {
    sup = std::max(sup, rv.norm());
  }
  report.final_sup_residual = sup;
  return report;
}

QuasiPotentialTable quasi_potential_scan(const ModelSpec& model,
                                         const SolverConfig& base_config,
                                         const std::vector<double>& T_list,
                                         const DiscretePath& initial_path) {
  if (T_list.empty()) throw invalid_argument("quasi_potential_scan: T_list must be non-empty");
  for (double t : T_list) {
    if (!(t > 0.0)) throw invalid_argument("quasi_potential_scan: all T must be positive");
  }

  QuasiPotentialTable table;
  table.quasi_potential = std::numeric_limits<double>::infinity();
  DiscretePath warm = initial_path;

  for (double T : T_list) {
    SolverConfig cfg = base_config;
    cfg.T = T;
    DiscretePath init = warm;
    const double scale = T / warm.horizon();
    for (auto& t : init.times) t *= scale;
    init.times.front() = 0.0;
    init.times.back() = T;

    QuasiPotentialRow row;
    row.T = T;
    try {
      SolveReport rep = solve_mlp(model, cfg, init);
      row.min_action = rep.action_value;
      row.converged = rep.converged;
      warm = rep.path;
      if (rep.action_value < table.quasi_potential) {
        table.quasi_potential = rep.action_value;
        table.best_path = rep.path;
      }
    } catch (const std::exception& e) {
      row.error = e.what();
      row.min_action = std::numeric_limits<double>::quiet_NaN();
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace mvmam
