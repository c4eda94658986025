#include "mvmam/model.hpp"

#include <vector>

namespace mvmam {

double pairwise_sum(const double* data, std::size_t n) {
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = data[0];
    for (std::size_t i = 1; i < n; ++i) s += data[i];
    return s;
  }
  std::size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

double pairwise_sum(const std::vector<double>& values) {
  return pairwise_sum(values.data(), values.size());
}

namespace {

void check_dim(const ModelSpec& model, const Vec& x, const char* what) {
  if (x.size() != model.dim) {
    throw invalid_argument(std::string(what) + ": expected dimension " +
                           std::to_string(model.dim) + ", got " +
                           std::to_string(x.size()));
  }
}

}  // namespace

Vec eval_V(const ModelSpec& model, const Vec& x) {
  check_dim(model, x, "eval_V");
  return model.V(x);
}

Vec eval_F(const ModelSpec& model, const Vec& r) {
  check_dim(model, r, "eval_F");
  return model.F(r);
}

Vec eval_b(const ModelSpec& model, const Vec& x, const Vec& y) {
  check_dim(model, x, "eval_b(x)");
  check_dim(model, y, "eval_b(y)");
  return model.V(x) - model.F(x - y);
}

Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double h) {
  const auto n = x.size();
  Mat jac(n, n);
  Vec xp = x, xm = x;
  for (Eigen::Index j = 0; j < n; ++j) {
    xp(j) = x(j) + h;
    xm(j) = x(j) - h;
    jac.col(j) = (f(xp) - f(xm)) / (2.0 * h);
    xp(j) = x(j);
    xm(j) = x(j);
  }
  return jac;
}

Mat jac_b_x(const ModelSpec& model, const Vec& x, const Vec& y) {
  check_dim(model, x, "jac_b_x(x)");
  check_dim(model, y, "jac_b_x(y)");
  const Vec r = x - y;
  Mat gv = model.grad_V ? model.grad_V(x) : fd_jacobian(model.V, x, model.fd_step);
  Mat gf = model.grad_F ? model.grad_F(r) : fd_jacobian(model.F, r, model.fd_step);
  return gv - gf;
}

Mat jac_b_y(const ModelSpec& model, const Vec& x, const Vec& y) {
  check_dim(model, x, "jac_b_y(x)");
  check_dim(model, y, "jac_b_y(y)");
  const Vec r = x - y;
  return model.grad_F ? model.grad_F(r) : fd_jacobian(model.F, r, model.fd_step);
}

}  // namespace mvmam
