#include <doctest.h>

#include <filesystem>

#include "liefield/curve.hpp"

using namespace liefield;

namespace {

GroupElement t2_point(double x, double y) {
  auto g = GroupDescriptor::translation(2);
  Matrix h = Matrix::Identity(3, 3);
  h(0, 2) = x;
  h(1, 2) = y;
  return {std::move(g), std::move(h)};
}

DiscretizedCurve unit_circle(int n) {
  return build_curve(GroupDescriptor::translation(2),
                     circle_t2(1.0, {0.0, 0.0}, n), true);
}

Twist default_screw() {
  Twist zeta(6);
  zeta << 0.0, 0.0, 0.0, 0.0, 0.0, 2.0 * M_PI;
  return zeta;
}

}  // namespace

TEST_CASE("circle tangents match the analytic parameter speed") {
  const DiscretizedCurve curve = unit_circle(360);
  for (int i = 0; i < curve.size(); ++i) {
    // Analytic tangent of the unit-speed-in-s circle: 2 pi (-sin, cos).
    const double phi = 2.0 * M_PI * i / curve.size();
    Eigen::Vector2d expected(-std::sin(phi), std::cos(phi));
    expected *= 2.0 * M_PI;
    CHECK(std::abs(curve.tangents[i].norm() - 2.0 * M_PI) < 1e-3);
    CHECK((curve.tangents[i] - Twist(expected)).norm() < 1e-3);
  }
}

TEST_CASE("constant curves are rejected as improper") {
  std::vector<Matrix> samples(10, Matrix::Identity(3, 3));
  CHECK_THROWS_WITH_AS(
      build_curve(GroupDescriptor::translation(2), samples, true),
      "improper parametrization", std::invalid_argument);
}

TEST_CASE("off-group samples are rejected") {
  auto samples = circle_t2(1.0, {0.0, 0.0}, 16);
  samples[5](0, 0) = 1.5;
  CHECK_THROWS_WITH_AS(
      build_curve(GroupDescriptor::translation(2), samples, true),
      "off-group sample", std::invalid_argument);
}

TEST_CASE("screw curve tangents equal the generating twist") {
  const Twist zeta = default_screw();
  Matrix start = Matrix::Identity(4, 4);
  start(0, 3) = 0.5;
  const DiscretizedCurve curve = build_curve(
      GroupDescriptor::se3(), screw_se3(zeta, start, 500, true), true);
  // Central differences leave an O(ds^2) remainder; |zeta|^3 ds^2 / 6 is
  // about 1.7e-4 here.
  for (int i = 0; i < curve.size(); i += 37) {
    CHECK((curve.tangents[i] - zeta).norm() < 5e-4);
  }
}

TEST_CASE("nearest search hits exact samples") {
  const DiscretizedCurve curve = unit_circle(360);
  for (int k : {0, 17, 181, 359}) {
    const CurveQueryResult q = find_nearest(curve, curve.element(k));
    CHECK(q.s_star_index == k);
    CHECK(q.distance == 0.0);
    CHECK(!q.near_tie);
  }
}

TEST_CASE("circle geometry: outside point and center") {
  const DiscretizedCurve curve = unit_circle(360);

  const CurveQueryResult outside = find_nearest(curve, t2_point(2.0, 0.0));
  CHECK(outside.s_star_index == 0);
  CHECK(outside.distance == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(!outside.near_tie);

  const CurveQueryResult center = find_nearest(curve, t2_point(0.0, 0.0));
  CHECK(center.near_tie);
  CHECK(center.distance == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(!center.tie_indices.empty());
  CHECK(center.tie_indices.front() == 0);
}

TEST_CASE("parallel search is bit-identical to serial") {
  const Twist zeta = default_screw();
  Matrix start = Matrix::Identity(4, 4);
  start(0, 3) = 0.5;
  const DiscretizedCurve curve = build_curve(
      GroupDescriptor::se3(), screw_se3(zeta, start, 4001, true), true);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const GroupElement h =
        random_element(curve.group, rng, 1.5, M_PI - 1e-2);
    SearchOptions serial;
    const CurveQueryResult a = find_nearest(curve, h, serial);
    for (int workers : {2, 3, 4, 8}) {
      SearchOptions par;
      par.parallel = true;
      par.workers = workers;
      const CurveQueryResult b = find_nearest(curve, h, par);
      CHECK(b.s_star_index == a.s_star_index);
      CHECK(b.distance == a.distance);  // bitwise
      CHECK(b.near_tie == a.near_tie);
    }
  }
}

TEST_CASE("refinement keeps s_star within half a sample") {
  const DiscretizedCurve curve = unit_circle(360);
  SearchOptions refine;
  refine.refine = true;
  const double phi = 2.0 * M_PI * (10.5 / 360.0);  // between samples 10, 11
  const CurveQueryResult q =
      find_nearest(curve, t2_point(1.4 * std::cos(phi), 1.4 * std::sin(phi)),
                   refine);
  CHECK(std::abs(q.s_star - phi / (2.0 * M_PI)) < 0.25 * curve.ds);
}

TEST_CASE("doubling the sampling never inflates the distance") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> unit(-2.0, 2.0);
  const DiscretizedCurve coarse = unit_circle(500);
  const DiscretizedCurve fine = unit_circle(1000);
  const double chord = 2.0 * M_PI / 500.0;
  for (int trial = 0; trial < 50; ++trial) {
    const GroupElement h = t2_point(unit(rng), unit(rng));
    const double dc = find_nearest(coarse, h).distance;
    const double df = find_nearest(fine, h).distance;
    CHECK(df <= dc + 1e-12);
    CHECK(dc - df <= chord);
  }
}

TEST_CASE("first-order optimality at interior minimizers") {
  const DiscretizedCurve curve = unit_circle(2000);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> radius(1.3, 3.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  for (int trial = 0; trial < 50; ++trial) {
    const double r = radius(rng);
    const double phi = angle(rng);
    const GroupElement h = t2_point(r * std::cos(phi), r * std::sin(phi));
    const CurveQueryResult q = find_nearest(curve, h);
    REQUIRE(!q.near_tie);
    // Directional derivative of D(h, .) along the curve tangent at s*.
    const auto f_w = [&](const GroupElement& y) {
      return element_distance(h, y);
    };
    const double along = group_gradient(*curve.group, f_w,
                                        curve.element(q.s_star_index), 1e-5)
                             .dot(curve.tangents[q.s_star_index]);
    CHECK(std::abs(along) <= 1e-2 * curve.tangents[q.s_star_index].norm());
  }
}

TEST_CASE("min_tie_distance on probes") {
  const DiscretizedCurve curve = unit_circle(360);
  CHECK(min_tie_distance(curve, {}) ==
        std::numeric_limits<double>::infinity());
  CHECK(min_tie_distance(curve, {t2_point(2.0, 0.0)}) ==
        std::numeric_limits<double>::infinity());
  CHECK(min_tie_distance(curve, {t2_point(0.0, 0.0)}) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("antipodal rotation probe sits above the sqrt(2) pi floor") {
  // Curve with identity orientations; the probe at the center carries a
  // half-turn, so every candidate costs at least the full rotation angle.
  Twist zeta(6);
  zeta << 0.0, 0.0, 0.0, 0.0, 0.0, 2.0 * M_PI;
  Matrix start = Matrix::Identity(4, 4);
  start(0, 3) = 0.4;
  std::vector<Matrix> samples;
  for (int i = 0; i < 720; ++i) {
    Matrix h = Matrix::Identity(4, 4);
    const double phi = 2.0 * M_PI * i / 720.0;
    h(0, 3) = 0.4 * std::cos(phi);
    h(1, 3) = 0.4 * std::sin(phi);
    samples.push_back(std::move(h));
  }
  const DiscretizedCurve curve =
      build_curve(GroupDescriptor::se3(), samples, true);

  Matrix probe = Matrix::Identity(4, 4);
  probe.topLeftCorner<3, 3>() =
      Eigen::AngleAxisd(M_PI, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  const double recorded =
      min_tie_distance(curve, {{curve.group, probe}});
  CHECK(recorded >= std::sqrt(2.0) * M_PI - 1e-9);
  CHECK(recorded < std::numeric_limits<double>::infinity());
}

TEST_CASE("curve files round-trip") {
  const Twist zeta = default_screw();
  Matrix start = Matrix::Identity(4, 4);
  start(0, 3) = 0.5;
  const DiscretizedCurve curve = build_curve(
      GroupDescriptor::se3(), screw_se3(zeta, start, 64, true), true);

  const auto path = std::filesystem::temp_directory_path() /
                    "liefield_test_curve.json";
  save_curve(curve, path);
  const DiscretizedCurve loaded = load_curve(path);
  std::filesystem::remove(path);

  REQUIRE(loaded.size() == curve.size());
  CHECK(loaded.closed == curve.closed);
  for (int i = 0; i < curve.size(); ++i) {
    CHECK((loaded.samples[i] - curve.samples[i]).norm() == 0.0);
  }
}

TEST_CASE("generators reject degenerate twists") {
  const Twist zero = Twist::Zero(6);
  const auto samples = screw_se3(zero, Matrix::Identity(4, 4), 16, true);
  CHECK_THROWS_WITH_AS(build_curve(GroupDescriptor::se3(), samples, true),
                       "improper parametrization", std::invalid_argument);
}

TEST_CASE("generated demo curves are valid and separated") {
  Twist a(6), b(6);
  a << 0.3, 0.0, 0.2, 0.0, 0.8, 0.0;
  b << 0.0, 0.25, 0.0, 0.7, 0.0, 0.9;
  Matrix start = Matrix::Identity(4, 4);
  start(0, 3) = 0.4;
  start(1, 3) = -0.2;
  const DiscretizedCurve curve = build_curve(
      GroupDescriptor::se3(), composed_se3(a, b, start, 4000), true);
  CHECK(curve.max_tangent_norm() > 1e-9);
  CHECK(min_nonadjacent_distance(curve) > 1e-9);
}
