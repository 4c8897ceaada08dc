#include <doctest.h>

#include <random>

#include "liefield/matrix_ops.hpp"

using namespace liefield;

namespace {

// Independent oracle: plain truncated exponential series, valid for the
// moderate norms used in these tests (remainder < 1e-20 at |A| <= 2).
Matrix exp_series(const Matrix& a, int terms = 40) {
  Matrix sum = Matrix::Identity(a.rows(), a.cols());
  Matrix term = sum;
  for (int k = 1; k <= terms; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

// Independent oracle: Rodrigues closed form for a rotation about an axis.
Eigen::Matrix3d rodrigues(const Eigen::Vector3d& axis, double angle) {
  Eigen::Matrix3d k;
  k << 0, -axis.z(), axis.y(), axis.z(), 0, -axis.x(), -axis.y(), axis.x(), 0;
  return Eigen::Matrix3d::Identity() + std::sin(angle) * k +
         (1.0 - std::cos(angle)) * k * k;
}

Matrix random_matrix(int n, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> unit(-scale, scale);
  Matrix a(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) a(r, c) = unit(rng);
  }
  return a;
}

}  // namespace

TEST_CASE("mat_exp identity and diagonal cases") {
  CHECK((mat_exp(Matrix::Zero(3, 3)) - Matrix::Identity(3, 3)).norm() ==
        doctest::Approx(0.0).epsilon(1e-15));

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  const Matrix e = mat_exp(d);
  CHECK(e(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
  CHECK(e(1, 1) == doctest::Approx(std::exp(2.0)).epsilon(1e-14));
  CHECK(std::abs(e(0, 1)) + std::abs(e(1, 0)) == 0.0);
}

TEST_CASE("mat_exp matches Rodrigues for a z-rotation generator") {
  Matrix gen = Matrix::Zero(3, 3);
  gen(0, 1) = -M_PI / 2.0;
  gen(1, 0) = M_PI / 2.0;
  const Matrix expected = rodrigues({0, 0, 1}, M_PI / 2.0);
  CHECK((mat_exp(gen) - expected).norm() < 1e-14);
}

TEST_CASE("mat_exp agrees with the truncated series on random inputs") {
  std::mt19937_64 rng(42);
  for (int n : {2, 3, 4, 6, 8}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix a = random_matrix(n, rng, 2.0 / n);
      const Matrix reference = exp_series(a);
      CHECK((mat_exp(a) - reference).norm() <= 1e-12 * (1.0 + a.norm()));
    }
  }
}

TEST_CASE("mat_exp rejects non-finite input") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_WITH_AS(mat_exp(a), "non-finite matrix",
                       std::invalid_argument);
}

TEST_CASE("mat_log identity and diagonal cases") {
  CHECK(mat_log(Matrix::Identity(3, 3)).norm() < 1e-15);

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = std::exp(1.0);
  d(1, 1) = std::exp(2.0);
  const Matrix l = mat_log(d);
  CHECK(l(0, 0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(l(1, 1) == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("mat_log of a quarter-turn recovers the scaled generator") {
  const Matrix z = rodrigues({0, 0, 1}, M_PI / 2.0);
  const Matrix y = mat_log(z);
  Matrix expected = Matrix::Zero(3, 3);
  expected(0, 1) = -M_PI / 2.0;
  expected(1, 0) = M_PI / 2.0;
  CHECK((y - expected).norm() < 1e-12);
  CHECK((mat_exp(y) - z).norm() < 1e-12);
}

TEST_CASE("mat_log round trip on random principal-strip inputs") {
  std::mt19937_64 rng(7);
  for (int n : {2, 3, 4, 6}) {
    for (int trial = 0; trial < 20; ++trial) {
      Matrix a = random_matrix(n, rng, 1.0);
      a *= 2.0 / std::max(2.0, a.norm());  // |A|_F <= 2 keeps eigenvalues
                                           // inside the principal strip
      CHECK((mat_log(mat_exp(a)) - a).norm() <= 1e-8);
    }
  }
}

TEST_CASE("exp of commuting matrices multiplies") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = random_matrix(4, rng, 0.4);
    const Matrix b = 0.5 * a + 0.3 * a * a;  // commutes with a
    CHECK((mat_exp(a + b) - mat_exp(a) * mat_exp(b)).norm() <= 1e-10);
  }
}

TEST_CASE("mat_log rejects the negative real axis") {
  CHECK_THROWS_AS(mat_log(rodrigues({0, 0, 1}, M_PI)), PrincipalBranchError);
  CHECK_THROWS_AS(mat_log(-Matrix::Identity(2, 2)), PrincipalBranchError);
}

TEST_CASE("mat_log converges just inside the boundary") {
  const Matrix z = rodrigues({0, 1, 0}, M_PI - 1e-3);
  const Matrix y = mat_log(z);
  CHECK((mat_exp(y) - z).norm() < 1e-10);
  CHECK(y.norm() == doctest::Approx(std::sqrt(2.0) * (M_PI - 1e-3))
                        .epsilon(1e-10));
}

TEST_CASE("frobenius_norm basics") {
  CHECK(frobenius_norm(Matrix::Zero(4, 4)) == 0.0);
  CHECK(frobenius_norm(Matrix::Identity(3, 3)) ==
        doctest::Approx(std::sqrt(3.0)));
  Matrix p = Matrix::Zero(2, 2);
  p(0, 0) = 3.0;
  p(0, 1) = 4.0;
  CHECK(frobenius_norm(p) == doctest::Approx(5.0));
}

TEST_CASE("inverse quality on well-conditioned matrices") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix a = random_matrix(5, rng, 1.0) + 3.0 * Matrix::Identity(5, 5);
    CHECK((a.inverse() * a - Matrix::Identity(5, 5)).norm() < 1e-10);
  }
}

TEST_CASE("polar_orthonormalize repairs drifted rotations") {
  std::mt19937_64 rng(5);
  const Eigen::Matrix3d q = rodrigues({0.6, 0.8, 0.0}, 1.1);
  Eigen::Matrix3d drifted = q + 1e-8 * Eigen::Matrix3d::Random();
  const Eigen::Matrix3d fixed = polar_orthonormalize(drifted);
  CHECK((fixed.transpose() * fixed - Eigen::Matrix3d::Identity()).norm() <
        1e-13);
  CHECK((fixed - q).norm() < 1e-7);
}
