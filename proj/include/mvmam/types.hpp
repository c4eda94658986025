#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace mvmam {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Thrown when an input violates a documented precondition.
class invalid_argument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a computation blows up or a linear solve breaks down.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown for unknown identifiers, missing parameters and bad run files.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool all_finite(const Vec& v) { return v.allFinite(); }

/// Deterministic pairwise summation; fixed reduction order regardless of
/// thread count so repeated runs are bit-identical.
double pairwise_sum(const double* data, std::size_t n);
double pairwise_sum(const std::vector<double>& values);

}  // namespace mvmam
