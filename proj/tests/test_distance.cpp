#include <doctest.h>

#include "liefield/distance.hpp"

using namespace liefield;

namespace {

GroupElement t2_point(double x, double y) {
  auto g = GroupDescriptor::translation(2);
  Matrix h = Matrix::Identity(3, 3);
  h(0, 2) = x;
  h(1, 2) = y;
  return {std::move(g), std::move(h)};
}

GroupElement se3_pose(const Eigen::Matrix3d& q, const Eigen::Vector3d& t) {
  Matrix h = Matrix::Identity(4, 4);
  h.topLeftCorner<3, 3>() = q;
  h.topRightCorner<3, 1>() = t;
  return {GroupDescriptor::se3(), std::move(h)};
}

Eigen::Matrix3d rot(const Eigen::Vector3d& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

}  // namespace

TEST_CASE("distance is zero exactly at equal elements") {
  std::mt19937_64 rng(1);
  const auto se3 = GroupDescriptor::se3();
  for (int i = 0; i < 20; ++i) {
    const GroupElement v = random_element(se3, rng, 1.0, 2.0);
    CHECK(distance_se3(v, v).first == 0.0);
    CHECK(distance_via_log(v, v) < 1e-12);
    const GroupElement w = random_element(se3, rng, 1.0, 2.0);
    if ((v.matrix - w.matrix).norm() > 1e-6) {
      CHECK(distance_se3(v, w).first > 1e-8);
    }
  }
}

TEST_CASE("euclidean reduction on the translation group") {
  const GroupElement v = t2_point(0.0, 0.0);
  const GroupElement w = t2_point(3.0, 4.0);
  CHECK(element_distance(v, w) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(distance_via_log(v, w) == doctest::Approx(5.0).epsilon(1e-13));
}

TEST_CASE("pure rotation distance is sqrt(2) theta") {
  const GroupElement v = GroupElement::identity(GroupDescriptor::se3());
  const GroupElement w = se3_pose(rot({0, 0, 1}, M_PI / 2.0), {0, 0, 0});
  const auto [d, diag] = distance_se3(v, w);
  CHECK(d == doctest::Approx(std::sqrt(2.0) * M_PI / 2.0).epsilon(1e-12));
  CHECK(diag.theta == doctest::Approx(M_PI / 2.0).epsilon(1e-12));
  CHECK(distance_via_log(v, w) == doctest::Approx(d).epsilon(1e-10));
}

TEST_CASE("pure translation forces M to the identity") {
  const GroupElement v = GroupElement::identity(GroupDescriptor::se3());
  const GroupElement w = se3_pose(Eigen::Matrix3d::Identity(),
                                  {0.6, 0.0, 0.8});
  const auto [d, diag] = distance_se3(v, w);
  CHECK(d == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(diag.theta == 0.0);
  CHECK(diag.translation_norm_sq == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("closed form agrees with the generic logarithm route") {
  std::mt19937_64 rng(2);
  const auto se3 = GroupDescriptor::se3();
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const GroupElement v = random_element(se3, rng, 1.0, M_PI - 1e-3);
    const GroupElement w = random_element(se3, rng, 1.0, M_PI - 1e-3);
    const double closed = distance_se3(v, w).first;
    const double generic = distance_via_log(v, w);
    worst = std::max(worst, std::abs(closed - generic) / (1.0 + closed));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("closed form stays accurate at small angles") {
  // The alpha formula is 0/0 at theta = 0; the series branch must agree
  // with the generic route through the cancellation-prone band.
  const auto se3 = GroupDescriptor::se3();
  const GroupElement v = GroupElement::identity(se3);
  for (double theta : {1e-8, 1e-6, 1e-4, 5e-3, 9e-3, 1.1e-2, 0.05}) {
    const GroupElement w =
        se3_pose(rot({0.26, 0.72, 0.64}, theta), {1.0, -0.4, 0.3});
    const double closed = distance_se3(v, w).first;
    const double generic = distance_via_log(v, w);
    CHECK(std::abs(closed - generic) <= 1e-10 * (1.0 + closed));
  }
}

TEST_CASE("distance is continuous across the pi boundary") {
  const auto se3 = GroupDescriptor::se3();
  const GroupElement v = GroupElement::identity(se3);
  const Eigen::Vector3d t(0.3, 0.1, -0.2);

  const double at_pi_x = distance_se3(v, se3_pose(rot({1, 0, 0}, M_PI), t)).first;
  const double at_pi_y = distance_se3(v, se3_pose(rot({0, 1, 0}, M_PI), t)).first;
  for (double eps : {1e-4, 1e-6, 1e-8}) {
    const double near_x =
        distance_se3(v, se3_pose(rot({1, 0, 0}, M_PI - eps), t)).first;
    const double near_y =
        distance_se3(v, se3_pose(rot({0, 1, 0}, M_PI - eps), t)).first;
    CHECK(std::abs(near_x - at_pi_x) < 10.0 * eps + 1e-9);
    CHECK(std::abs(near_y - at_pi_y) < 10.0 * eps + 1e-9);
  }

  DistanceDiagnostics diag;
  Eigen::Matrix4d relmat = Eigen::Matrix4d::Identity();
  relmat.topLeftCorner<3, 3>() = rot({1, 0, 0}, M_PI);
  distance_se3_matrices(relmat, &diag);
  CHECK(diag.branch == DistanceDiagnostics::Branch::Boundary);

  // The generic route hits the branch failure there and must fall back.
  const GroupElement w_pi = se3_pose(rot({1, 0, 0}, M_PI), t);
  CHECK(distance_via_log(v, w_pi) ==
        doctest::Approx(at_pi_x).epsilon(1e-12));
}

TEST_CASE("boundary logarithm errors on the translation group are impossible"
          " but the error path exists for odd inputs") {
  // T(m) never hits the branch: nilpotent logs always exist.
  const GroupElement v = t2_point(0, 0);
  const GroupElement w = t2_point(100.0, -40.0);
  CHECK(distance_via_log(v, w) ==
        doctest::Approx(element_distance(v, w)).epsilon(1e-12));
}

TEST_CASE("interpolation endpoints and translation midpoint") {
  std::mt19937_64 rng(3);
  const auto se3 = GroupDescriptor::se3();
  const GroupElement v = random_element(se3, rng, 1.0, 2.5);
  const GroupElement w = random_element(se3, rng, 1.0, 2.5);
  CHECK((interpolate(0.0, v, w).matrix - v.matrix).norm() < 1e-10);
  CHECK((interpolate(1.0, v, w).matrix - w.matrix).norm() < 1e-10);
  CHECK(se3->contains(interpolate(0.37, v, w).matrix, 1e-9));

  const GroupElement a = t2_point(0.0, 0.0);
  const GroupElement b = t2_point(2.0, 4.0);
  const GroupElement mid = interpolate(0.5, a, b);
  CHECK(mid.matrix(0, 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(mid.matrix(1, 2) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("interpolation works at the pi boundary") {
  const auto se3 = GroupDescriptor::se3();
  const GroupElement v = GroupElement::identity(se3);
  const GroupElement w = se3_pose(rot({0, 0, 1}, M_PI), {0.5, 0, 0});
  const GroupElement end = interpolate(1.0, v, w);
  CHECK((end.matrix - w.matrix).norm() < 1e-9);
  CHECK(se3->contains(interpolate(0.5, v, w).matrix, 1e-9));
}

TEST_CASE("left invariance residuals") {
  std::mt19937_64 rng(4);
  const auto se3 = GroupDescriptor::se3();
  const GroupElement v = random_element(se3, rng, 1.0, 2.0);
  const GroupElement w = random_element(se3, rng, 1.0, 2.0);
  CHECK(left_invariance_residual(GroupElement::identity(se3), v, w) == 0.0);

  for (int i = 0; i < 100; ++i) {
    const GroupElement a = random_element(se3, rng, 1.0, M_PI - 1e-3);
    const GroupElement p = random_element(se3, rng, 1.0, M_PI - 1e-3);
    const GroupElement q = random_element(se3, rng, 1.0, M_PI - 1e-3);
    CHECK(left_invariance_residual(a, p, q) <= 1e-9);
  }

  const auto t3 = GroupDescriptor::translation(3);
  for (int i = 0; i < 100; ++i) {
    const GroupElement a = random_element(t3, rng, 2.0);
    const GroupElement p = random_element(t3, rng, 2.0);
    const GroupElement q = random_element(t3, rng, 2.0);
    CHECK(left_invariance_residual(a, p, q) <= 1e-12);
  }
}

TEST_CASE("chainability residuals") {
  std::mt19937_64 rng(5);
  const auto se3 = GroupDescriptor::se3();
  std::uniform_real_distribution<double> unit01(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const GroupElement v = random_element(se3, rng, 1.0, M_PI - 1e-3);
    const GroupElement w = random_element(se3, rng, 1.0, M_PI - 1e-3);
    CHECK(chainability_residual(v, w, 0.0) <= 1e-10);
    CHECK(chainability_residual(v, w, 1.0) <= 1e-10);
    CHECK(chainability_residual(v, w, 0.3) <= 1e-8);
  }
  const auto t3 = GroupDescriptor::translation(3);
  for (int i = 0; i < 100; ++i) {
    const GroupElement v = random_element(t3, rng, 2.0);
    const GroupElement w = random_element(t3, rng, 2.0);
    CHECK(chainability_residual(v, w, unit01(rng)) <= 1e-12);
  }
}

TEST_CASE("local linearity limit equals the distance") {
  std::mt19937_64 rng(6);
  const auto se3 = GroupDescriptor::se3();
  const double sigmas[] = {1e-2, 1e-3, 1e-4};
  for (int i = 0; i < 50; ++i) {
    const GroupElement v = random_element(se3, rng, 1.0, M_PI - 1e-3);
    const GroupElement w = random_element(se3, rng, 1.0, M_PI - 1e-3);
    const double d = element_distance(v, w);
    if (d < 1e-3) continue;
    CHECK(std::abs(local_linearity_ratio(v, w, sigmas) - d) <= 1e-6);
  }
  const GroupElement a = t2_point(0, 0);
  const GroupElement b = t2_point(3, 4);
  CHECK(local_linearity_ratio(a, b, sigmas) ==
        doctest::Approx(5.0).epsilon(1e-9));

  // Coincident endpoints: the ratio is zero at every sigma.
  CHECK(local_linearity_ratio(a, a, sigmas) == 0.0);
}

TEST_CASE("log-exp-log identity") {
  std::mt19937_64 rng(7);
  const auto se3 = GroupDescriptor::se3();
  const GroupElement z = random_element(se3, rng, 1.0, M_PI - 1e-2);
  CHECK(log_exp_log_residual(z, 0.0) <= 1e-15);
  CHECK(log_exp_log_residual(z, 1.0) <= 1e-9);
  for (int i = 0; i < 50; ++i) {
    const GroupElement zz = random_element(se3, rng, 1.0, M_PI - 1e-3);
    CHECK(log_exp_log_residual(zz, 0.7) <= 1e-9);
  }
}

TEST_CASE("closed-form rotation log is exact near and at pi") {
  for (double theta : {M_PI, M_PI - 1e-7, M_PI - 1e-3, 2.5, 1e-7}) {
    for (const Eigen::Vector3d axis :
         {Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0.48, -0.6, 0.64),
          Eigen::Vector3d(0, 0, 1)}) {
      const Eigen::Matrix3d q = rot(axis, theta);
      const Eigen::Matrix3d omega = so3_log_closed(q);
      CHECK((omega + omega.transpose()).norm() < 1e-12);
      CHECK((mat_exp(omega) - Matrix(q)).norm() < 1e-9);
    }
  }
}

TEST_CASE("closed-form se3 log round-trips") {
  std::mt19937_64 rng(8);
  const auto se3 = GroupDescriptor::se3();
  for (int i = 0; i < 50; ++i) {
    const GroupElement h = random_element(se3, rng, 2.0, M_PI);
    const Eigen::Matrix4d l = se3_log_closed(h.matrix);
    CHECK((mat_exp(l) - h.matrix).norm() < 1e-9);
  }
}
