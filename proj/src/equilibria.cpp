#include "mvmam/equilibria.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace mvmam {

std::string to_string(StabilityKind kind) {
  switch (kind) {
    case StabilityKind::stable: return "stable";
    case StabilityKind::saddle: return "saddle";
    case StabilityKind::unstable: return "unstable";
    case StabilityKind::non_hyperbolic: return "non-hyperbolic";
  }
  return "non-hyperbolic";
}

std::vector<double> eigen_real_parts(const Mat& jacobian) {
  std::vector<double> parts;
  if (jacobian.rows() == 1) {
    parts.push_back(jacobian(0, 0));
  } else if (jacobian.rows() == 2) {
    const double tr = jacobian(0, 0) + jacobian(1, 1);
    const double det = jacobian(0, 0) * jacobian(1, 1) - jacobian(0, 1) * jacobian(1, 0);
    const double disc = tr * tr - 4.0 * det;
    if (disc >= 0.0) {
      const double s = std::sqrt(disc);
      parts.push_back(0.5 * (tr - s));
      parts.push_back(0.5 * (tr + s));
    } else {
      parts.push_back(0.5 * tr);
      parts.push_back(0.5 * tr);
    }
  } else {
    Eigen::EigenSolver<Mat> solver(jacobian, /*computeEigenvectors=*/false);
    for (Eigen::Index i = 0; i < jacobian.rows(); ++i) {
      parts.push_back(solver.eigenvalues()(i).real());
    }
  }
  std::sort(parts.begin(), parts.end());
  return parts;
}

StabilityKind classify(const Mat& jacobian, double tol) {
  if (jacobian.rows() != jacobian.cols() || jacobian.rows() == 0) {
    throw invalid_argument("classify: square matrix required");
  }
  if (!jacobian.allFinite()) throw invalid_argument("classify: non-finite entries");
  const auto parts = eigen_real_parts(jacobian);
  bool any_zero = false, any_pos = false, any_neg = false;
  for (double p : parts) {
    if (std::abs(p) <= tol) {
      any_zero = true;
    } else if (p > 0.0) {
      any_pos = true;
    } else {
      any_neg = true;
    }
  }
  if (any_zero) return StabilityKind::non_hyperbolic;
  if (any_pos && any_neg) return StabilityKind::saddle;
  if (any_pos) return StabilityKind::unstable;
  return StabilityKind::stable;
}

namespace {

Mat drift_jacobian(const ModelSpec& model, const Vec& x, const Vec& anchor) {
  return jac_b_x(model, x, anchor);  // grad V(x) - grad F(x - anchor)
}

}  // namespace

std::vector<FixedPoint> find_fixed_points(const ModelSpec& model, const Vec& anchor,
                                          const std::vector<Vec>& seeds, double tol,
                                          int max_iter) {
  if (seeds.empty()) throw invalid_argument("find_fixed_points: seeds must be non-empty");
  if (!(tol > 0.0)) throw invalid_argument("find_fixed_points: tol must be positive");
  if (anchor.size() != model.dim) throw invalid_argument("find_fixed_points: anchor dimension");

  auto drift = [&](const Vec& x) { return eval_b(model, x, anchor); };

  // Roots escaping the (inflated) seed bounding box are treated as divergence;
  // |b_bar| can tend to zero along unbounded valleys without a root there.
  Vec box_lo = seeds.front(), box_hi = seeds.front();
  for (const auto& s : seeds) {
    box_lo = box_lo.cwiseMin(s);
    box_hi = box_hi.cwiseMax(s);
  }
  box_lo = box_lo.cwiseMin(anchor);
  box_hi = box_hi.cwiseMax(anchor);
  const Vec margin = (box_hi - box_lo) + Vec::Constant(model.dim, 1.0);
  const Vec dom_lo = box_lo - margin;
  const Vec dom_hi = box_hi + margin;
  auto in_domain = [&](const Vec& x) {
    return (x.array() >= dom_lo.array()).all() && (x.array() <= dom_hi.array()).all();
  };

  // The anchor is a distinguished candidate: with F(0) = 0 the drift there is
  // V(anchor), so an anchored equilibrium of V is found regardless of the grid.
  std::vector<Vec> all_seeds = seeds;
  all_seeds.push_back(anchor);

  std::vector<Vec> roots;
  for (const auto& seed : all_seeds) {
    Vec x = seed;
    bool converged = false;
    for (int it = 0; it < max_iter; ++it) {
      const Vec fx = drift(x);
      const double fn = fx.norm();
      if (fn <= tol) {
        converged = true;
        break;
      }
      Mat jac = drift_jacobian(model, x, anchor);
      Eigen::PartialPivLU<Mat> lu(jac);
      const Vec step = lu.solve(-fx);
      if (!step.allFinite()) break;
      double s = 1.0;
      bool improved = false;
      for (int halving = 0; halving < 30; ++halving) {
        const Vec trial = x + s * step;
        if (trial.allFinite() && drift(trial).norm() < fn) {
          x = trial;
          improved = true;
          break;
        }
        s *= 0.5;
      }
      if (!improved) break;
    }
    if (!converged) continue;

    // two full Newton polish steps push the root to machine precision so the
    // deduplication radius 10*tol is meaningful
    for (int polish = 0; polish < 2; ++polish) {
      const Vec fx = drift(x);
      Eigen::PartialPivLU<Mat> lu(drift_jacobian(model, x, anchor));
      const Vec step = lu.solve(-fx);
      if (step.allFinite() && drift(x + step).norm() <= fx.norm()) x += step;
    }
    if (drift(x).norm() > tol || !in_domain(x)) continue;

    bool duplicate = false;
    for (const auto& r : roots) {
      if ((r - x).norm() < 10.0 * tol) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) roots.push_back(x);
  }

  // deterministic output order independent of the seed ordering
  std::sort(roots.begin(), roots.end(), [](const Vec& a, const Vec& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (a(i) != b(i)) return a(i) < b(i);
    }
    return false;
  });

  std::vector<FixedPoint> out;
  for (const auto& r : roots) {
    FixedPoint fp;
    fp.location = r;
    fp.residual_norm = drift(r).norm();
    const Mat jac = drift_jacobian(model, r, anchor);
    fp.eigen_real_parts = eigen_real_parts(jac);
    fp.kind = classify(jac, 1e-8);
    out.push_back(std::move(fp));
  }
  return out;
}

}  // namespace mvmam
