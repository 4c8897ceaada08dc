#include "liefield/distance.hpp"

#include <algorithm>
#include <cmath>

namespace liefield {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Taylor coefficients of alpha(theta) = (2 - 2cos(theta) - theta^2) /
// (4 (1 - cos(theta))^2) about theta = 0. The direct formula is 0/0 there
// and loses precision to cancellation below theta ~ 1e-2.
double alpha_series(double theta_sq) {
  return -1.0 / 12.0 - theta_sq / 90.0 - 13.0 * theta_sq * theta_sq / 15120.0;
}

double alpha_of(double theta, double u) {
  if (theta < 1e-2) return alpha_series(theta * theta);
  const double one_minus_u = 1.0 - u;
  return (2.0 - 2.0 * u - theta * theta) / (4.0 * one_minus_u * one_minus_u);
}

}  // namespace

double rotation_angle(const Eigen::Matrix3d& q) {
  const double u = std::clamp(0.5 * (q.trace() - 1.0), -1.0, 1.0);
  const double v =
      std::clamp((q - q.transpose()).norm() / (2.0 * std::sqrt(2.0)), 0.0, 1.0);
  return std::atan2(v, u);
}

double distance_se3_matrices(const Eigen::Matrix4d& v_inv_w,
                             DistanceDiagnostics* diag) {
  const Eigen::Matrix3d q = v_inv_w.topLeftCorner<3, 3>();
  const Eigen::Vector3d t = v_inv_w.topRightCorner<3, 1>();

  const double u = std::clamp(0.5 * (q.trace() - 1.0), -1.0, 1.0);
  const double v =
      std::clamp((q - q.transpose()).norm() / (2.0 * std::sqrt(2.0)), 0.0, 1.0);
  const double theta = std::atan2(v, u);
  const double alpha = alpha_of(theta, u);

  // M = I (1 - 2 alpha) + (Q + Q^T) alpha; t^T M t expanded directly.
  const Eigen::Vector3d qt = q * t;
  const double t_m_t = std::max(
      0.0, (1.0 - 2.0 * alpha) * t.squaredNorm() + 2.0 * alpha * t.dot(qt));

  if (diag) {
    diag->theta = theta;
    diag->translation_norm_sq = t_m_t;
    diag->branch = (theta > kPi - kBoundaryAngleMargin)
                       ? DistanceDiagnostics::Branch::Boundary
                       : DistanceDiagnostics::Branch::Principal;
  }
  return std::sqrt(2.0 * theta * theta + t_m_t);
}

std::pair<double, DistanceDiagnostics> distance_se3(const GroupElement& v,
                                                    const GroupElement& w) {
  const Eigen::Matrix4d rel =
      affine_inverse(*v.group, v.matrix) * w.matrix;
  DistanceDiagnostics diag;
  const double d = distance_se3_matrices(rel, &diag);
  return {d, diag};
}

double distance_so3(const GroupElement& v, const GroupElement& w) {
  const Eigen::Matrix3d rel = v.matrix.transpose() * w.matrix;
  return std::sqrt(2.0) * rotation_angle(rel);
}

double distance_via_log(const GroupElement& v, const GroupElement& w) {
  const Matrix rel = v.matrix.inverse() * w.matrix;
  try {
    return mat_log(rel).norm();
  } catch (const PrincipalBranchError&) {
    // The value is branch-independent on these groups.
    switch (v.group->kind) {
      case GroupKind::SE3:
        return distance_se3(v, w).first;
      case GroupKind::SO3:
        return distance_so3(v, w);
      default:
        throw std::domain_error("boundary logarithm");
    }
  }
}

double element_distance(const GroupElement& v, const GroupElement& w) {
  switch (v.group->kind) {
    case GroupKind::Translation: {
      const int n = v.group->matrix_order;
      return (w.matrix.col(n - 1).head(n - 1) -
              v.matrix.col(n - 1).head(n - 1))
          .norm();
    }
    case GroupKind::SO3:
      return distance_so3(v, w);
    case GroupKind::SE3:
      return distance_se3(v, w).first;
  }
  throw std::logic_error("unreachable");
}

Eigen::Matrix3d so3_log_closed(const Eigen::Matrix3d& q) {
  const double theta = rotation_angle(q);
  const Eigen::Matrix3d skew_part = 0.5 * (q - q.transpose());
  if (theta < 1e-9) return skew_part;

  if (theta > kPi - 1e-6) {
    // Near pi the skew part degenerates; recover the axis from the
    // symmetric part: a a^T = I + (Q + Q^T - 2I) / (2 (1 - cos(theta))).
    const Eigen::Matrix3d outer =
        Eigen::Matrix3d::Identity() +
        (q + q.transpose() - 2.0 * Eigen::Matrix3d::Identity()) /
            (2.0 * (1.0 - std::cos(theta)));
    int imax = 0;
    outer.diagonal().maxCoeff(&imax);
    Eigen::Vector3d axis = outer.col(imax) /
                           std::sqrt(std::max(outer(imax, imax), 1e-300));
    axis.normalize();
    // Keep whichever sign agrees with the residual skew part.
    const Eigen::Vector3d skew_vec(skew_part(2, 1), skew_part(0, 2),
                                   skew_part(1, 0));
    if (skew_vec.dot(axis) < 0.0) axis = -axis;
    Eigen::Matrix3d k;
    k << 0, -axis.z(), axis.y(), axis.z(), 0, -axis.x(), -axis.y(), axis.x(),
        0;
    return theta * k;
  }
  return (theta / (2.0 * std::sin(theta))) * (q - q.transpose());
}

Eigen::Matrix4d se3_log_closed(const Eigen::Matrix4d& h) {
  const Eigen::Matrix3d omega = so3_log_closed(h.topLeftCorner<3, 3>());
  const Eigen::Vector3d t = h.topRightCorner<3, 1>();
  const double theta =
      std::sqrt(0.5) * omega.norm();  // |omega_vec| for a skew matrix

  // Inverse left Jacobian: I - omega/2 + c * omega^2, with
  // c = (1 - (theta/2) cot(theta/2)) / theta^2.
  double c;
  if (theta < 1e-4) {
    c = 1.0 / 12.0 + theta * theta / 720.0;
  } else {
    c = (1.0 - 0.5 * theta * std::cos(0.5 * theta) / std::sin(0.5 * theta)) /
        (theta * theta);
  }
  const Eigen::Matrix3d j_inv =
      Eigen::Matrix3d::Identity() - 0.5 * omega + c * omega * omega;

  Eigen::Matrix4d log_h = Eigen::Matrix4d::Zero();
  log_h.topLeftCorner<3, 3>() = omega;
  log_h.topRightCorner<3, 1>() = j_inv * t;
  return log_h;
}

Matrix group_log(const GroupElement& z) {
  const int n = z.group->matrix_order;
  switch (z.group->kind) {
    case GroupKind::Translation: {
      Matrix a = Matrix::Zero(n, n);
      a.col(n - 1).head(n - 1) = z.matrix.col(n - 1).head(n - 1);
      return a;
    }
    case GroupKind::SO3:
      return so3_log_closed(z.matrix);
    case GroupKind::SE3:
      return se3_log_closed(z.matrix);
  }
  throw std::logic_error("unreachable");
}

GroupElement interpolate(double sigma, const GroupElement& v,
                         const GroupElement& w) {
  const Matrix rel = affine_inverse(*v.group, v.matrix) * w.matrix;
  const Matrix log_rel = group_log({v.group, rel});
  return {v.group, v.matrix * mat_exp(sigma * log_rel)};
}

double left_invariance_residual(const GroupElement& a, const GroupElement& v,
                                const GroupElement& w) {
  const GroupElement av{v.group, a.matrix * v.matrix};
  const GroupElement aw{w.group, a.matrix * w.matrix};
  return std::abs(element_distance(av, aw) - element_distance(v, w));
}

double chainability_residual(const GroupElement& v, const GroupElement& w,
                             double sigma) {
  const GroupElement mid = interpolate(sigma, v, w);
  return std::abs(element_distance(v, mid) + element_distance(mid, w) -
                  element_distance(v, w));
}

double local_linearity_ratio(const GroupElement& v, const GroupElement& w,
                             std::span<const double> sigmas) {
  if (sigmas.empty()) throw std::invalid_argument("no sigma values");
  const double sigma = *std::min_element(sigmas.begin(), sigmas.end());
  if (sigma <= 0.0) throw std::invalid_argument("sigma must be positive");
  return element_distance(v, interpolate(sigma, v, w)) / sigma;
}

double log_exp_log_residual(const GroupElement& z, double r) {
  const Matrix log_z = mat_log(z.matrix);
  const Matrix scaled = r * log_z;
  return (mat_log(mat_exp(scaled)) - scaled).norm();
}

Matrix affine_inverse(const GroupDescriptor& g, const Matrix& h) {
  const int n = g.matrix_order;
  if (g.kind == GroupKind::SO3) return h.transpose();
  Matrix inv = Matrix::Identity(n, n);
  const auto rot = h.topLeftCorner(n - 1, n - 1);
  inv.topLeftCorner(n - 1, n - 1) = rot.transpose();
  inv.col(n - 1).head(n - 1) = -rot.transpose() * h.col(n - 1).head(n - 1);
  return inv;
}

Eigen::VectorXd translation_part(const GroupElement& h) {
  const int n = h.group->matrix_order;
  if (h.group->kind == GroupKind::SO3) {
    throw std::domain_error("group has no translation part");
  }
  return h.matrix.col(n - 1).head(n - 1);
}

}  // namespace liefield
