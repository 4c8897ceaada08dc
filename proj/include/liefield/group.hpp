// liefield: vector-field path following on matrix Lie groups
//
// Group descriptors for T(m), SO(3), SE(3); the hat/vee isomorphism between
// twist coordinates and the Lie algebra; derivative operators on the group;
// the exact exponential integrator.

#pragma once

#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "liefield/matrix_ops.hpp"

namespace liefield {

using Twist = Eigen::VectorXd;

enum class GroupKind { Translation, SO3, SE3 };

struct GroupDescriptor;
using GroupPtr = std::shared_ptr<const GroupDescriptor>;

/// Immutable metadata for a supported matrix Lie group: matrix order n,
/// algebra dimension m, and the algebra basis fixing the hat/vee maps.
///
/// SE(3) twists are ordered [v; w]: entries 1-3 are the linear velocity of
/// the fixed-frame origin point, entries 4-6 the angular velocity, both in
/// the fixed frame.
struct GroupDescriptor {
  GroupKind kind;
  int matrix_order;                  // n
  int algebra_dim;                   // m
  std::vector<Matrix> basis;         // E_k, k = 1..m
  Eigen::MatrixXd basis_pinv;        // m x n^2, solves vee as a linear map
  std::string name;

  static GroupPtr translation(int m);
  static GroupPtr so3();
  static GroupPtr se3();
  static GroupPtr by_name(const std::string& name);  // "T(2)", "SO3", "SE3"

  /// Distance from the membership manifold: rotation-block orthogonality
  /// defect plus affine last-row / translation-block defects.
  double membership_residual(const Matrix& h) const;
  bool contains(const Matrix& h, double tol = 1e-8) const {
    return membership_residual(h) <= tol;
  }
};

struct GroupElement {
  GroupPtr group;
  Matrix matrix;

  static GroupElement identity(GroupPtr g) {
    Matrix m = Matrix::Identity(g->matrix_order, g->matrix_order);
    return {std::move(g), std::move(m)};
  }
};

/// hat: twist coordinates -> Lie algebra matrix, sum of zeta_k * E_k.
Matrix hat(const GroupDescriptor& g, const Twist& zeta);

/// vee: Lie algebra matrix -> twist coordinates (inverse of hat). The input
/// must lie in the basis span up to residual 1e-6 * (1 + |a|_F); otherwise
/// throws std::domain_error("not in algebra span").
Twist vee(const GroupDescriptor& g, const Matrix& a);

/// Twist of a group-valued path at sigma: vee(dG/dsigma * G^-1), with the
/// derivative taken by central finite difference of step h.
Twist path_twist(const GroupDescriptor& g,
                 const std::function<GroupElement(double)>& path, double sigma,
                 double h);

/// Directional-derivative row vector of a scalar function on the group,
/// entry j = (f(exp(E_j * eps) * H) - f(H)) / eps (forward difference).
/// Throws std::domain_error("objective non-finite") when f misbehaves.
Eigen::RowVectorXd group_gradient(
    const GroupDescriptor& g, const std::function<double(const GroupElement&)>& f,
    const GroupElement& h, double eps = 1e-3);

/// Central-difference variant, used as an independent oracle in tests.
Eigen::RowVectorXd group_gradient_central(
    const GroupDescriptor& g, const std::function<double(const GroupElement&)>& f,
    const GroupElement& h, double eps = 1e-5);

/// Converts a fixed-frame twist to the body frame:
/// xi' = vee(H^-1 * hat(xi) * H), so that hat(xi) * H = H * hat(xi').
Twist body_frame_twist(const GroupElement& h, const Twist& xi_fixed);

/// Exact integrator for a twist held constant over dt:
/// H+ = exp(hat(xi) * dt) * H, re-orthonormalized onto the group when
/// rounding drift exceeds 1e-10.
GroupElement exp_step(const GroupElement& h, const Twist& xi, double dt);

/// Uniformly random group element: rotation axis uniform on the sphere,
/// angle uniform in [0, max_angle], translation uniform in a cube of the
/// given half-width.
GroupElement random_element(GroupPtr g, std::mt19937_64& rng,
                            double translation_scale = 1.0,
                            double max_angle = 3.14159265358979323846);

/// Random twist with entries uniform in [-scale, scale].
Twist random_twist(const GroupDescriptor& g, std::mt19937_64& rng,
                   double scale = 1.0);

}  // namespace liefield
