#pragma once

#include <string>
#include <vector>

#include "mvmam/model.hpp"

namespace mvmam {

/// Strictly increasing time nodes starting at 0.
struct TimeGrid {
  std::vector<double> nodes;

  std::size_t size() const { return nodes.size(); }
  double front() const { return nodes.front(); }
  double back() const { return nodes.back(); }
  void validate() const;
};

/// Uniform grid over [0, t_end] with step dt; the last step is shortened to
/// land exactly on t_end.
TimeGrid make_uniform_grid(double t_end, double dt);

struct Trajectory {
  TimeGrid grid;
  std::vector<Vec> states;
};

/// Explicit-Euler integration of the skeleton equation
///   eta' = V(eta) - F(0),  eta(0) = x0
/// on exactly the given grid. The initial state is returned verbatim; a
/// state norm above 1e8 aborts with a numerical_error naming the step.
Trajectory integrate_skeleton(const ModelSpec& model, const Vec& x0, const TimeGrid& grid);

/// Classical 4th-order integration of the effective-drift flow
///   xi' = V(xi) - F(xi - anchor)
/// on a uniform grid of step dt up to t_end.
Trajectory integrate_flow(const ModelSpec& model, const Vec& anchor, const Vec& x0,
                          double t_end, double dt);

struct SeedFlow {
  std::size_t seed_index = 0;
  Trajectory trajectory;  // empty when ok == false
  bool ok = true;
  std::string error;
};

/// One flow trajectory per seed (order preserved). A failing seed is reported
/// in place with its error tagged by index; the remaining seeds still run.
std::vector<SeedFlow> equipotential_field(const ModelSpec& model, const Vec& anchor,
                                          const std::vector<Vec>& seeds, double t_end,
                                          double dt);

}  // namespace mvmam
