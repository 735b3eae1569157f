#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <utility>

namespace lrr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Numerical failure in an iterative kernel (non-convergence, loss of
/// positive definiteness, singular solve). The CLI maps this to exit code 2;
/// argument and precondition violations use std::invalid_argument instead.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Rejects matrices carrying NaN or Inf entries. `what` names the offending
/// argument in the exception message.
void require_finite(const Matrix& a, const char* what);

void require_same_shape(const Matrix& a, const Matrix& b, const char* what);

/// Symmetric part (a + a^T)/2 together with ||a - a^T||_F, so callers can
/// both tolerate and report slightly asymmetric inputs.
std::pair<Matrix, double> symmetrize(const Matrix& a);

/// Validates that `a` is square and symmetric up to 1e-9 * max(1, ||a||_F),
/// returning the exactly symmetric part. Throws std::invalid_argument beyond
/// that tolerance.
Matrix require_symmetric(const Matrix& a, const char* what);

} // namespace lrr
