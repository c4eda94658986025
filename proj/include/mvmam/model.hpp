#pragma once

#include <functional>
#include <map>
#include <string>

#include "mvmam/types.hpp"

namespace mvmam {

/// A complete problem instance: vector field V, interaction kernel F,
/// parameters and the two endpoints of the sought transition.
///
/// The effective drift used everywhere downstream is
///   b(x, y) = V(x) - F(x - y).
/// Analytic Jacobians are optional; central finite differences with step
/// `fd_step` are used where they are missing.
struct ModelSpec {
  int dim = 0;
  std::string field_kind;
  std::map<std::string, double> field_params;
  std::string interaction_kind;
  std::map<std::string, double> interaction_params;
  Vec anchor_x1;
  Vec target_x2;

  std::function<Vec(const Vec&)> V;
  std::function<Vec(const Vec&)> F;
  std::function<Mat(const Vec&)> grad_V;  // nullable: finite differences
  std::function<Mat(const Vec&)> grad_F;  // nullable: finite differences

  double fd_step = 1e-6;
};

Vec eval_V(const ModelSpec& model, const Vec& x);
Vec eval_F(const ModelSpec& model, const Vec& r);

/// b(x, y) = V(x) - F(x - y)
Vec eval_b(const ModelSpec& model, const Vec& x, const Vec& y);

/// d/dx b(x, y) = grad V(x) - grad F(x - y)
Mat jac_b_x(const ModelSpec& model, const Vec& x, const Vec& y);

/// d/dy b(x, y) = + grad F(x - y)  (chain rule on F(x - y))
Mat jac_b_y(const ModelSpec& model, const Vec& x, const Vec& y);

/// Central finite-difference Jacobian of an arbitrary map, used as the
/// fallback when a model does not supply analytic derivatives.
Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double h);

}  // namespace mvmam
