#pragma once

// KM vector field, the Lax pair (L, B) with dL/dt = [B, L], the invariants
// H_k = Tr(L^k)/k and the spectrum of L.

#include <cmath>
#include <vector>

#include "kmlab/core_state.hpp"
#include "kmlab/error.hpp"

namespace kmlab {

/// u_i (u_{i+1} - u_{i-1}) with zero boundary values.
Vector km_rhs(const UPoint& u);
Matrix km_jacobian(const UPoint& u);

/// Lax matrix of size 2n. Diagonal (u_1, u_1+u_2, ..., u_{2n-2}+u_{2n-1},
/// u_{2n-1}); entries (i, i+2) and (i+2, i) equal sqrt(u_i u_{i+1}).
template <typename Real>
Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> lax_matrix(const Vector& u) {
  const Eigen::Index N = u.size();
  require(N % 2 == 1, ErrorCode::kInvalidDimension, "u-space dimension must be odd");
  for (Eigen::Index i = 0; i < N; ++i) {
    if (!(u[i] > 0.0)) fail(ErrorCode::kDomain, "Lax matrix needs strictly positive u");
  }
  const Eigen::Index size = N + 1;
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> L =
      Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>::Zero(size, size);
  auto ue = [&](Eigen::Index i) { return (i >= 1 && i <= N) ? static_cast<Real>(u[i - 1]) : Real(0); };
  for (Eigen::Index r = 0; r < size; ++r) L(r, r) = ue(r) + ue(r + 1);
  using std::sqrt;
  for (Eigen::Index i = 1; i + 1 <= N; ++i) {
    const Real s = sqrt(ue(i) * ue(i + 1));
    L(i - 1, i + 1) = s;
    L(i + 1, i - 1) = s;
  }
  return L;
}

Matrix lax_l(const UPoint& u);
Matrix lax_b(const UPoint& u);

/// dL/du_k for 1 <= k <= N.
Matrix lax_l_partial(const UPoint& u, int k);

/// max-abs entry of sum_k dL/du_k * km_rhs_k - (BL - LB).
double lax_residual(const UPoint& u);

/// (H_1, ..., H_kmax), H_k = Tr(L^k)/k.
std::vector<double> invariants(const UPoint& u, int kmax);

/// Gradient of H_k with respect to u: dH_k/du_c = Tr(L^{k-1} dL/du_c).
Vector invariant_gradient(const UPoint& u, int k);

/// The Hamiltonian sum(u_i) used with pi2; equals H_1/2.
double km_hamiltonian(const UPoint& u);

/// Eigenvalues of L, ascending.
Vector spectrum(const UPoint& u);

/// |sum(lambda^k)/k - H_k| for k = 1..kmax.
std::vector<double> newton_residuals(const UPoint& u, int kmax);

}  // namespace kmlab
