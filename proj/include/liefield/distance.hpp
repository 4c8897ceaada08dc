// liefield: vector-field path following on matrix Lie groups
//
// Element-to-element distance |log(V^-1 W)|_F on exponential groups, with a
// closed-form SE(3) kernel, the geodesic-style interpolation path, and
// executable residuals for the properties the controller relies on
// (left-invariance, chainability, local linearity).

#pragma once

#include <span>
#include <utility>

#include "liefield/group.hpp"

namespace liefield {

struct DistanceDiagnostics {
  double theta = 0.0;                // SE(3)/SO(3) rotation angle in [0, pi]
  double translation_norm_sq = 0.0;  // t^T M t term
  enum class Branch { Principal, Boundary } branch = Branch::Principal;
};

/// Angle at which diagnostics switch to Branch::Boundary (the distance value
/// itself is branch-independent; this only flags proximity to pi-rotations,
/// where the distance stops being differentiable).
inline constexpr double kBoundaryAngleMargin = 1e-3;

/// Rotation angle of Q in [0, pi] from u = (tr(Q)-1)/2 and
/// v = |Q - Q^T|_F / (2*sqrt(2)) via atan2(v, u).
double rotation_angle(const Eigen::Matrix3d& q);

/// Closed-form SE(3) distance |log(V^-1 W)|_F = sqrt(2 theta^2 + t^T M t).
/// Total on SE(3) x SE(3); no branch choice is needed.
std::pair<double, DistanceDiagnostics> distance_se3(const GroupElement& v,
                                                    const GroupElement& w);

/// Closed-form SO(3) distance sqrt(2) * theta.
double distance_se3_matrices(const Eigen::Matrix4d& v_inv_w,
                             DistanceDiagnostics* diag = nullptr);
double distance_so3(const GroupElement& v, const GroupElement& w);

/// Reference route through the generic principal matrix logarithm. On
/// SE(3)/SO(3) a principal-branch failure (rotation by exactly pi) falls
/// back to the closed-form kernel, whose value is branch-independent; on
/// other groups it throws std::domain_error("boundary logarithm").
double distance_via_log(const GroupElement& v, const GroupElement& w);

/// Fast per-group dispatcher used by the curve search: exact Euclidean
/// distance on T(m), closed forms on SO(3)/SE(3).
double element_distance(const GroupElement& v, const GroupElement& w);

/// Group-structured logarithm: closed forms for T(m)/SO(3)/SE(3), defined
/// for every group element (any valid branch at pi-rotations).
Matrix group_log(const GroupElement& z);

/// Closed-form rotation logarithm, robust near 0 and pi.
Eigen::Matrix3d so3_log_closed(const Eigen::Matrix3d& q);
Eigen::Matrix4d se3_log_closed(const Eigen::Matrix4d& h);

/// Interpolation path Phi(sigma) = V * exp(sigma * log(V^-1 W)), with
/// Phi(0) = V and Phi(1) = W.
GroupElement interpolate(double sigma, const GroupElement& v,
                         const GroupElement& w);

/// |D(AV, AW) - D(V, W)|.
double left_invariance_residual(const GroupElement& a, const GroupElement& v,
                                const GroupElement& w);

/// |D(V, Phi_sigma) + D(Phi_sigma, W) - D(V, W)|.
double chainability_residual(const GroupElement& v, const GroupElement& w,
                             double sigma);

/// D(V, Phi_sigma) / sigma at the smallest sigma in the list; equals
/// D(V, W) exactly for this distance.
double local_linearity_ratio(const GroupElement& v, const GroupElement& w,
                             std::span<const double> sigmas);

/// |log(exp(r log Z)) - r log Z|_F through the generic matrix logarithm.
double log_exp_log_residual(const GroupElement& z, double r);

/// Rigid-transform inverse for SE(3)/T(m) matrices (exact block form).
Matrix affine_inverse(const GroupDescriptor& g, const Matrix& h);

/// Translation vector of an affine group element (the T operator on T(m),
/// the position part on SE(3)).
Eigen::VectorXd translation_part(const GroupElement& h);

}  // namespace liefield
