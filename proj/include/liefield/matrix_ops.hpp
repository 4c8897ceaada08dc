// liefield: vector-field path following on matrix Lie groups
//
// Dense square-matrix kernels shared by all groups: matrix exponential,
// principal matrix logarithm, polar re-orthonormalization.

#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace liefield {

using Matrix = Eigen::MatrixXd;

/// Thrown by mat_log when the input has an eigenvalue on the closed
/// negative real axis and the principal branch does not exist.
struct PrincipalBranchError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Matrix exponential by scaling-and-squaring with a degree-13 Pade core.
/// Throws std::invalid_argument("non-finite matrix") on NaN/Inf input.
Matrix mat_exp(const Matrix& a);

/// Principal matrix logarithm by inverse scaling-and-squaring:
/// repeated principal square roots (product-form Denman-Beavers),
/// then a Gregory series once the iterate is close to identity.
///
/// Requires an invertible input with no eigenvalue on the closed negative
/// real axis; otherwise throws PrincipalBranchError("principal branch
/// undefined"). The result Y satisfies exp(Y) = Z with eigenvalues in the
/// strip Im(lambda) in (-pi, pi).
Matrix mat_log(const Matrix& z);

inline double frobenius_norm(const Matrix& a) {
  if (!a.allFinite()) throw std::invalid_argument("non-finite matrix");
  return a.norm();
}

/// Projects a nearly-orthogonal matrix onto the closest rotation via the
/// Newton polar iteration Q <- (Q + Q^-T)/2.
Eigen::Matrix3d polar_orthonormalize(const Eigen::Matrix3d& q);

}  // namespace liefield
