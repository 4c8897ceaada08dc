#include "liefield/group.hpp"

#include <cmath>

namespace liefield {
namespace {

Eigen::MatrixXd stack_basis_pinv(const std::vector<Matrix>& basis, int n) {
  const int m = static_cast<int>(basis.size());
  Eigen::MatrixXd stacked(n * n, m);
  for (int k = 0; k < m; ++k) {
    stacked.col(k) = Eigen::Map<const Eigen::VectorXd>(basis[k].data(), n * n);
  }
  // Bases here have full column rank by construction.
  return (stacked.transpose() * stacked)
      .ldlt()
      .solve(stacked.transpose());
}

GroupPtr make_descriptor(GroupKind kind, int n, int m,
                         std::vector<Matrix> basis, std::string name) {
  auto d = std::make_shared<GroupDescriptor>();
  d->kind = kind;
  d->matrix_order = n;
  d->algebra_dim = m;
  d->basis = std::move(basis);
  d->basis_pinv = stack_basis_pinv(d->basis, n);
  d->name = std::move(name);
  return d;
}

Matrix skew_generator(int n, int i, int j) {
  Matrix e = Matrix::Zero(n, n);
  e(i, j) = -1.0;
  e(j, i) = 1.0;
  return e;
}

}  // namespace

GroupPtr GroupDescriptor::translation(int m) {
  if (m < 1) throw std::invalid_argument("translation group needs m >= 1");
  const int n = m + 1;
  std::vector<Matrix> basis;
  basis.reserve(m);
  for (int k = 0; k < m; ++k) {
    Matrix e = Matrix::Zero(n, n);
    e(k, n - 1) = 1.0;
    basis.push_back(std::move(e));
  }
  return make_descriptor(GroupKind::Translation, n, m, std::move(basis),
                         "T(" + std::to_string(m) + ")");
}

GroupPtr GroupDescriptor::so3() {
  std::vector<Matrix> basis;
  basis.push_back(skew_generator(3, 1, 2));  // rotation about x
  basis.push_back(skew_generator(3, 2, 0));  // rotation about y
  basis.push_back(skew_generator(3, 0, 1));  // rotation about z
  return make_descriptor(GroupKind::SO3, 3, 3, std::move(basis), "SO3");
}

GroupPtr GroupDescriptor::se3() {
  // Twist layout [v; w]: E_1..E_3 translate, E_4..E_6 rotate.
  std::vector<Matrix> basis;
  for (int k = 0; k < 3; ++k) {
    Matrix e = Matrix::Zero(4, 4);
    e(k, 3) = 1.0;
    basis.push_back(std::move(e));
  }
  basis.push_back(skew_generator(4, 1, 2));
  basis.push_back(skew_generator(4, 2, 0));
  basis.push_back(skew_generator(4, 0, 1));
  return make_descriptor(GroupKind::SE3, 4, 6, std::move(basis), "SE3");
}

GroupPtr GroupDescriptor::by_name(const std::string& name) {
  if (name == "SO3") return so3();
  if (name == "SE3") return se3();
  if (name.size() >= 4 && name.substr(0, 2) == "T(" && name.back() == ')') {
    return translation(std::stoi(name.substr(2, name.size() - 3)));
  }
  throw std::invalid_argument("unknown group: " + name);
}

double GroupDescriptor::membership_residual(const Matrix& h) const {
  if (h.rows() != matrix_order || h.cols() != matrix_order ||
      !h.allFinite()) {
    return std::numeric_limits<double>::infinity();
  }
  const int n = matrix_order;
  switch (kind) {
    case GroupKind::SO3: {
      double r = (h.transpose() * h - Matrix::Identity(n, n)).norm();
      if (h.determinant() <= 0.0) r += 1.0;
      return r;
    }
    case GroupKind::SE3: {
      const Eigen::Matrix3d q = h.topLeftCorner<3, 3>();
      double r = (q.transpose() * q - Eigen::Matrix3d::Identity()).norm();
      if (q.determinant() <= 0.0) r += 1.0;
      r += h.row(n - 1).head(n - 1).norm();
      r += std::abs(h(n - 1, n - 1) - 1.0);
      return r;
    }
    case GroupKind::Translation: {
      double r = (h.topLeftCorner(n - 1, n - 1) -
                  Matrix::Identity(n - 1, n - 1))
                     .norm();
      r += h.row(n - 1).head(n - 1).norm();
      r += std::abs(h(n - 1, n - 1) - 1.0);
      return r;
    }
  }
  return std::numeric_limits<double>::infinity();
}

Matrix hat(const GroupDescriptor& g, const Twist& zeta) {
  if (zeta.size() != g.algebra_dim) {
    throw std::invalid_argument("twist length mismatch");
  }
  Matrix a = Matrix::Zero(g.matrix_order, g.matrix_order);
  for (int k = 0; k < g.algebra_dim; ++k) a += zeta[k] * g.basis[k];
  return a;
}

Twist vee(const GroupDescriptor& g, const Matrix& a) {
  if (a.rows() != g.matrix_order || a.cols() != g.matrix_order) {
    throw std::invalid_argument("matrix order mismatch");
  }
  const int n = g.matrix_order;
  const Eigen::Map<const Eigen::VectorXd> v(a.data(), n * n);
  Twist zeta = g.basis_pinv * v;
  const double residual = (hat(g, zeta) - a).norm();
  if (residual > 1e-6 * (1.0 + a.norm())) {
    throw std::domain_error("not in algebra span");
  }
  return zeta;
}

Twist path_twist(const GroupDescriptor& g,
                 const std::function<GroupElement(double)>& path, double sigma,
                 double h) {
  if (h <= 0.0) throw std::invalid_argument("step must be positive");
  const Matrix fwd = path(sigma + h).matrix;
  const Matrix bwd = path(sigma - h).matrix;
  const Matrix at = path(sigma).matrix;
  const Matrix derivative = (fwd - bwd) / (2.0 * h);
  return vee(g, derivative * at.inverse());
}

namespace {

Eigen::RowVectorXd gradient_impl(
    const GroupDescriptor& g, const std::function<double(const GroupElement&)>& f,
    const GroupElement& h, double eps, bool central) {
  const double f0 = central ? 0.0 : f(h);
  if (!central && !std::isfinite(f0)) {
    throw std::domain_error("objective non-finite");
  }
  Eigen::RowVectorXd grad(g.algebra_dim);
  for (int j = 0; j < g.algebra_dim; ++j) {
    const Matrix step = mat_exp(g.basis[j] * eps);
    const double fp = f({h.group, step * h.matrix});
    if (central) {
      const Matrix back = mat_exp(g.basis[j] * -eps);
      const double fm = f({h.group, back * h.matrix});
      grad[j] = (fp - fm) / (2.0 * eps);
    } else {
      grad[j] = (fp - f0) / eps;
    }
    if (!std::isfinite(grad[j])) {
      throw std::domain_error("objective non-finite");
    }
  }
  return grad;
}

}  // namespace

Eigen::RowVectorXd group_gradient(
    const GroupDescriptor& g, const std::function<double(const GroupElement&)>& f,
    const GroupElement& h, double eps) {
  return gradient_impl(g, f, h, eps, /*central=*/false);
}

Eigen::RowVectorXd group_gradient_central(
    const GroupDescriptor& g, const std::function<double(const GroupElement&)>& f,
    const GroupElement& h, double eps) {
  return gradient_impl(g, f, h, eps, /*central=*/true);
}

Twist body_frame_twist(const GroupElement& h, const Twist& xi_fixed) {
  const Matrix& m = h.matrix;
  return vee(*h.group, m.inverse() * hat(*h.group, xi_fixed) * m);
}

GroupElement exp_step(const GroupElement& h, const Twist& xi, double dt) {
  if (dt < 0.0) throw std::invalid_argument("negative step");
  if (dt == 0.0 || xi.isZero(0.0)) return h;
  Matrix next = mat_exp(hat(*h.group, xi) * dt) * h.matrix;

  const int n = h.group->matrix_order;
  switch (h.group->kind) {
    case GroupKind::SO3:
    case GroupKind::SE3: {
      Eigen::Matrix3d q = next.topLeftCorner<3, 3>();
      if ((q.transpose() * q - Eigen::Matrix3d::Identity()).norm() > 1e-10) {
        next.topLeftCorner<3, 3>() = polar_orthonormalize(q);
      }
      if (h.group->kind == GroupKind::SE3) {
        next.row(n - 1).setZero();
        next(n - 1, n - 1) = 1.0;
      }
      break;
    }
    case GroupKind::Translation:
      next.topLeftCorner(n - 1, n - 1) = Matrix::Identity(n - 1, n - 1);
      next.row(n - 1).setZero();
      next(n - 1, n - 1) = 1.0;
      break;
  }
  return {h.group, std::move(next)};
}

GroupElement random_element(GroupPtr g, std::mt19937_64& rng,
                            double translation_scale, double max_angle) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> angle_dist(0.0, max_angle);
  const int n = g->matrix_order;
  Matrix h = Matrix::Identity(n, n);

  if (g->kind == GroupKind::SO3 || g->kind == GroupKind::SE3) {
    Eigen::Vector3d axis;
    do {
      axis = Eigen::Vector3d(unit(rng), unit(rng), unit(rng));
    } while (axis.norm() < 1e-6 || axis.norm() > 1.0);
    axis.normalize();
    const double angle = angle_dist(rng);
    const Eigen::Matrix3d q =
        Eigen::AngleAxisd(angle, axis).toRotationMatrix();
    h.topLeftCorner<3, 3>() = q;
  }
  if (g->kind == GroupKind::SE3 || g->kind == GroupKind::Translation) {
    for (int k = 0; k < n - 1; ++k) {
      h(k, n - 1) = translation_scale * unit(rng);
    }
  }
  return {std::move(g), std::move(h)};
}

Twist random_twist(const GroupDescriptor& g, std::mt19937_64& rng,
                   double scale) {
  std::uniform_real_distribution<double> unit(-scale, scale);
  Twist t(g.algebra_dim);
  for (int k = 0; k < g.algebra_dim; ++k) t[k] = unit(rng);
  return t;
}

}  // namespace liefield
