#include "liefield/matrix_ops.hpp"

#include <cmath>

namespace liefield {
namespace {

// Degree-13 Pade numerator coefficients (Higham 2005).
constexpr double kPade13[] = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};

Matrix pade13(const Matrix& a) {
  const int n = static_cast<int>(a.rows());
  const Matrix id = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix u =
      a * (a6 * (kPade13[13] * a6 + kPade13[11] * a4 + kPade13[9] * a2) +
           kPade13[7] * a6 + kPade13[5] * a4 + kPade13[3] * a2 +
           kPade13[1] * id);
  const Matrix v =
      a6 * (kPade13[12] * a6 + kPade13[10] * a4 + kPade13[8] * a2) +
      kPade13[6] * a6 + kPade13[4] * a4 + kPade13[2] * a2 + kPade13[0] * id;
  return (v - u).partialPivLu().solve(v + u);
}

// One principal square root via the Denman-Beavers iteration with
// determinant scaling, which tames the transient growth for eigenvalues
// close to the negative real axis. Fails (returns false) when the
// iteration stops contracting, which happens when the principal root does
// not exist.
bool principal_sqrt(const Matrix& a, Matrix& root) {
  const int n = static_cast<int>(a.rows());
  const Matrix id = Matrix::Identity(n, n);
  Matrix y = a;
  Matrix z = id;
  constexpr int kMaxIter = 60;
  for (int it = 0; it < kMaxIter; ++it) {
    Eigen::PartialPivLU<Matrix> lu_y(y);
    Eigen::PartialPivLU<Matrix> lu_z(z);
    const double det = std::abs(lu_y.determinant() * lu_z.determinant());
    if (!std::isfinite(det) || det < 1e-300) return false;
    double gamma = std::pow(det, -1.0 / (2.0 * n));
    if (!std::isfinite(gamma) || gamma <= 0.0) gamma = 1.0;

    const Matrix y_next =
        0.5 * (gamma * y + lu_z.solve(id) / gamma);
    const Matrix z_next =
        0.5 * (gamma * z + lu_y.solve(id) / gamma);
    const double change = (y_next - y).norm();
    y = y_next;
    z = z_next;
    if (!y.allFinite() || !z.allFinite()) return false;
    if (change <= 1e-14 * y.norm()) {
      // Y converges to sqrt(A) and Z to its inverse.
      if ((y * z - id).norm() > 1e-6 * (1.0 + y.norm() * z.norm())) {
        return false;
      }
      root = y;
      return true;
    }
  }
  return false;
}

// Gregory series for log(z) with z near identity:
// log(z) = 2 * (x + x^3/3 + x^5/5 + ...),  x = (z - I)(z + I)^-1.
Matrix log_near_identity(const Matrix& z) {
  const int n = static_cast<int>(z.rows());
  const Matrix id = Matrix::Identity(n, n);
  const Matrix x = (z + id).partialPivLu().solve(z - id);
  const Matrix x2 = x * x;
  Matrix term = x;
  Matrix sum = x;
  for (int k = 3; k <= 31; k += 2) {
    term = term * x2;
    sum += term / static_cast<double>(k);
    if (term.norm() < 1e-18) break;
  }
  return 2.0 * sum;
}

}  // namespace

Matrix mat_exp(const Matrix& a) {
  if (!a.allFinite()) throw std::invalid_argument("non-finite matrix");
  if (a.rows() != a.cols()) throw std::invalid_argument("matrix not square");

  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();  // inf-norm
  int squarings = 0;
  // theta_13 from Higham; no scaling needed below it.
  constexpr double kTheta13 = 5.371920351148152;
  if (norm > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
  }
  Matrix r = pade13(a / std::ldexp(1.0, squarings));
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

Matrix mat_log(const Matrix& z) {
  if (!z.allFinite()) throw std::invalid_argument("non-finite matrix");
  if (z.rows() != z.cols()) throw std::invalid_argument("matrix not square");
  const int n = static_cast<int>(z.rows());
  const Matrix id = Matrix::Identity(n, n);

  // The principal branch requires the spectrum to avoid the closed
  // negative real axis. The square-root cascade below can silently
  // continue through the boundary (for a pi-rotation it lands on the
  // strip boundary instead of failing), so the branch condition is
  // checked on the input spectrum directly.
  const Eigen::VectorXcd eigenvalues = z.eigenvalues();
  for (int k = 0; k < n; ++k) {
    const std::complex<double> lambda = eigenvalues[k];
    const double scale = 1.0 + std::abs(lambda);
    if (lambda.real() < 1e-14 * scale &&
        std::abs(lambda.imag()) <= 1e-9 * scale) {
      throw PrincipalBranchError("principal branch undefined");
    }
  }

  Matrix current = z;
  int halvings = 0;
  constexpr int kMaxSqrt = 40;
  while ((current - id).norm() > 0.25) {
    if (halvings >= kMaxSqrt) {
      throw PrincipalBranchError("principal branch undefined");
    }
    Matrix root;
    if (!principal_sqrt(current, root)) {
      throw PrincipalBranchError("principal branch undefined");
    }
    current = root;
    ++halvings;
  }
  Matrix y = std::ldexp(1.0, halvings) * log_near_identity(current);

  // The square-root iteration can converge to a non-principal root when an
  // eigenvalue sits on (or numerically straddles) the negative real axis;
  // verify the round trip before returning.
  if (!y.allFinite() || (mat_exp(y) - z).norm() > 1e-8 * (1.0 + z.norm())) {
    throw PrincipalBranchError("principal branch undefined");
  }
  return y;
}

Eigen::Matrix3d polar_orthonormalize(const Eigen::Matrix3d& q) {
  Eigen::Matrix3d r = q;
  for (int it = 0; it < 20; ++it) {
    const Eigen::Matrix3d next = 0.5 * (r + r.inverse().transpose());
    r = next;
    if ((r.transpose() * r - Eigen::Matrix3d::Identity()).norm() < 1e-15) {
      break;
    }
  }
  return r;
}

}  // namespace liefield
