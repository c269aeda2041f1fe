#pragma once

// Cyclic Jacobi eigenvalue iteration for small dense symmetric matrices.
// Templated on the scalar so the drift monitor can run it in long double.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "kmlab/error.hpp"

namespace kmlab {

template <typename Real>
struct JacobiEigenResult {
  Eigen::Matrix<Real, Eigen::Dynamic, 1> values;  // ascending
  int sweeps = 0;
  Real off_norm = 0;
};

/// Sweeps over all (p, q) pairs until the off-diagonal Frobenius norm drops
/// below rel_tol * ||A||_F.
template <typename Real>
JacobiEigenResult<Real> jacobi_eigenvalues(Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> a,
                                           Real rel_tol = Real(1e-14), int max_sweeps = 64) {
  using std::abs;
  using std::sqrt;
  const Eigen::Index size = a.rows();
  require(size == a.cols(), ErrorCode::kDimensionMismatch, "jacobi_eigenvalues needs a square matrix");

  auto off_norm = [&] {
    Real s = 0;
    for (Eigen::Index p = 0; p < size; ++p)
      for (Eigen::Index q = p + 1; q < size; ++q) s += 2 * a(p, q) * a(p, q);
    return sqrt(s);
  };

  const Real threshold = rel_tol * a.norm();
  JacobiEigenResult<Real> result;
  for (; result.sweeps < max_sweeps; ++result.sweeps) {
    if (off_norm() <= threshold) break;
    for (Eigen::Index p = 0; p < size; ++p) {
      for (Eigen::Index q = p + 1; q < size; ++q) {
        const Real apq = a(p, q);
        if (apq == Real(0)) continue;
        const Real theta = (a(q, q) - a(p, p)) / (2 * apq);
        const Real t = (theta >= 0 ? Real(1) : Real(-1)) / (abs(theta) + sqrt(theta * theta + 1));
        const Real c = 1 / sqrt(t * t + 1);
        const Real s = t * c;
        for (Eigen::Index k = 0; k < size; ++k) {
          const Real akp = a(k, p);
          const Real akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < size; ++k) {
          const Real apk = a(p, k);
          const Real aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0;
        a(q, p) = 0;
      }
    }
  }
  result.off_norm = off_norm();
  require(result.off_norm <= threshold, ErrorCode::kInvalidArgument, "jacobi_eigenvalues did not converge");
  result.values = a.diagonal();
  std::sort(result.values.data(), result.values.data() + size);
  return result;
}

}  // namespace kmlab
