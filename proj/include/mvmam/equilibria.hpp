#pragma once

#include <string>
#include <vector>

#include "mvmam/model.hpp"

namespace mvmam {

enum class StabilityKind { stable, saddle, unstable, non_hyperbolic };

std::string to_string(StabilityKind kind);

struct FixedPoint {
  Vec location;
  StabilityKind kind = StabilityKind::non_hyperbolic;
  std::vector<double> eigen_real_parts;
  double residual_norm = 0.0;
};

/// Classify a Jacobian by the signs of its eigenvalue real parts. For d = 2
/// the trace/determinant/discriminant of the characteristic polynomial are
/// used directly; larger systems go through an iterative eigensolver. A real
/// part within tol of zero makes the point non-hyperbolic.
StabilityKind classify(const Mat& jacobian, double tol);

std::vector<double> eigen_real_parts(const Mat& jacobian);

/// Multi-start damped Newton on the effective drift
///   b_bar(x) = V(x) - F(x - anchor).
/// Step halving (up to 30) enforces descent of |b_bar|; converged roots are
/// polished, deduplicated within 10*tol, and classified via the Jacobian
/// grad V(x) - grad F(x - anchor). The anchor joins the seed set (it is an
/// exact root whenever it is an equilibrium of V). A seed that diverges or
/// leaves the inflated seed bounding box contributes no root.
std::vector<FixedPoint> find_fixed_points(const ModelSpec& model, const Vec& anchor,
                                          const std::vector<Vec>& seeds, double tol = 1e-12,
                                          int max_iter = 100);

}  // namespace mvmam
