#pragma once

#include "mvmam/skeleton.hpp"

namespace mvmam {

/// Midpoint-rule discretization of the action
///   I = 1/2 int |phi' - V(phi) + F(phi - eta)|^2 ds
/// over a path and a skeleton sharing the same time grid: per segment the
/// chord velocity is compared against the drift at the segment midpoints of
/// phi and eta. Always >= 0; segment contributions are combined with a
/// fixed-order pairwise sum so the result is reproducible.
double action(const ModelSpec& model, const Trajectory& path, const Trajectory& skeleton);

/// Central finite-difference gradient of the discrete action with respect to
/// each interior node (endpoints are pinned and report zero vectors).
/// Verification oracle for the Euler-Lagrange residual.
std::vector<Vec> action_gradient_fd(const ModelSpec& model, const Trajectory& path,
                                    const Trajectory& skeleton, double h);

}  // namespace mvmam
