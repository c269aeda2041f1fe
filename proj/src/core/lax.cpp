#include "kmlab/lax.hpp"

#include <cmath>

#include "kmlab/fields.hpp"
#include "kmlab/symmetric_eigen.hpp"

namespace kmlab {

Vector km_rhs(const UPoint& u) {
  const int N = u.size();
  Vector f(N);
  for (int i = 1; i <= N; ++i) f[i - 1] = u.u[i - 1] * (u_ext(u, i + 1) - u_ext(u, i - 1));
  return f;
}

Matrix km_jacobian(const UPoint& u) {
  const int N = u.size();
  Matrix J = Matrix::Zero(N, N);
  for (int i = 1; i <= N; ++i) {
    J(i - 1, i - 1) = u_ext(u, i + 1) - u_ext(u, i - 1);
    if (i + 1 <= N) J(i - 1, i) = u.u[i - 1];
    if (i - 1 >= 1) J(i - 1, i - 2) = -u.u[i - 1];
  }
  return J;
}

Matrix lax_l(const UPoint& u) { return lax_matrix<double>(u.u); }

Matrix lax_b(const UPoint& u) {
  const Matrix L = lax_l(u);
  Matrix B = Matrix::Zero(L.rows(), L.cols());
  for (Eigen::Index i = 0; i + 2 < L.rows(); ++i) {
    B(i, i + 2) = 0.5 * L(i, i + 2);
    B(i + 2, i) = -0.5 * L(i, i + 2);
  }
  return B;
}

Matrix lax_l_partial(const UPoint& u, int k) {
  const int N = u.size();
  require(k >= 1 && k <= N, ErrorCode::kInvalidArgument, "lax_l_partial index out of range");
  for (int i = 0; i < N; ++i) {
    if (!(u.u[i] > 0.0)) fail(ErrorCode::kDomain, "Lax matrix needs strictly positive u");
  }
  Matrix D = Matrix::Zero(N + 1, N + 1);
  // u_k appears on diagonal rows k and k+1 (1-based), i.e. 0-based k-1 and k.
  D(k - 1, k - 1) = 1.0;
  D(k, k) = 1.0;
  // sqrt(u_k u_{k+1}) at (k-1, k+1); sqrt(u_{k-1} u_k) at (k-2, k).
  if (k + 1 <= N) {
    const double d = 0.5 * std::sqrt(u.u[k] / u.u[k - 1]);
    D(k - 1, k + 1) = d;
    D(k + 1, k - 1) = d;
  }
  if (k - 1 >= 1) {
    const double d = 0.5 * std::sqrt(u.u[k - 2] / u.u[k - 1]);
    D(k - 2, k) = d;
    D(k, k - 2) = d;
  }
  return D;
}

double lax_residual(const UPoint& u) {
  const Matrix L = lax_l(u);
  const Matrix B = lax_b(u);
  const Vector f = km_rhs(u);
  Matrix Ldot = Matrix::Zero(L.rows(), L.cols());
  for (int k = 1; k <= u.size(); ++k) Ldot += f[k - 1] * lax_l_partial(u, k);
  return max_abs(Matrix(Ldot - (B * L - L * B)));
}

std::vector<double> invariants(const UPoint& u, int kmax) {
  require(kmax >= 1, ErrorCode::kInvalidArgument, "kmax must be >= 1");
  const Matrix L = lax_l(u);
  std::vector<double> H;
  Matrix P = Matrix::Identity(L.rows(), L.cols());
  for (int k = 1; k <= kmax; ++k) {
    P = P * L;
    H.push_back(P.trace() / k);
  }
  return H;
}

Vector invariant_gradient(const UPoint& u, int k) {
  require(k >= 1, ErrorCode::kInvalidArgument, "invariant index must be >= 1");
  const Matrix L = lax_l(u);
  Matrix P = Matrix::Identity(L.rows(), L.cols());
  for (int m = 1; m < k; ++m) P = P * L;
  Vector g(u.size());
  for (int c = 1; c <= u.size(); ++c) g[c - 1] = (P * lax_l_partial(u, c)).trace();
  return g;
}

double km_hamiltonian(const UPoint& u) { return u.u.sum(); }

Vector spectrum(const UPoint& u) { return jacobi_eigenvalues<double>(lax_l(u)).values; }

std::vector<double> newton_residuals(const UPoint& u, int kmax) {
  const Vector lambda = spectrum(u);
  const std::vector<double> H = invariants(u, kmax);
  std::vector<double> out;
  for (int k = 1; k <= kmax; ++k) {
    double power_sum = 0.0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) power_sum += std::pow(lambda[i], k);
    out.push_back(std::abs(power_sum / k - H[static_cast<std::size_t>(k - 1)]));
  }
  return out;
}

}  // namespace kmlab
