#pragma once

// Independent oracles for the unit tests. Deliberately simple and separate
// from the library's own finite-difference helpers.

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "kmlab/core_state.hpp"
#include "kmlab/fields.hpp"

namespace testing {

using kmlab::Matrix;
using kmlab::Vector;

// Fourth-order central difference with a fixed step.
inline Matrix jacobian_fd(const std::function<Vector(const Vector&)>& f, const Vector& x, double h = 1e-3) {
  const Vector f0 = f(x);
  Matrix J(f0.size(), x.size());
  for (Eigen::Index c = 0; c < x.size(); ++c) {
    auto at = [&](double s) {
      Vector y = x;
      y[c] += s * h;
      return f(y);
    };
    J.col(c) = (-at(2) + 8 * at(1) - 8 * at(-1) + at(-2)) / (12 * h);
  }
  return J;
}

inline Vector gradient_fd(const std::function<double(const Vector&)>& f, const Vector& x, double h = 1e-3) {
  auto g = [&](const Vector& y) { return Vector::Constant(1, f(y)); };
  return jacobian_fd(g, x, h).row(0).transpose();
}

// d pi / d x_c as a list of matrices, by the same stencil.
inline std::vector<Matrix> partials_fd(const std::function<Matrix(const Vector&)>& pi, const Vector& x,
                                       double h = 1e-3) {
  std::vector<Matrix> out;
  for (Eigen::Index c = 0; c < x.size(); ++c) {
    auto at = [&](double s) {
      Vector y = x;
      y[c] += s * h;
      return pi(y);
    };
    out.push_back((-at(2) + 8 * at(1) - 8 * at(-1) + at(-2)) / (12 * h));
  }
  return out;
}

// Brute-force Jacobi sum over all ordered triples.
inline double jacobi_brute(const Matrix& P, const std::vector<Matrix>& dP) {
  const Eigen::Index m = P.rows();
  double worst = 0.0;
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b)
      for (Eigen::Index c = 0; c < m; ++c) {
        double s = 0.0;
        for (Eigen::Index d = 0; d < m; ++d)
          s += P(a, d) * dP[d](b, c) + P(b, d) * dP[d](c, a) + P(c, d) * dP[d](a, b);
        worst = std::max(worst, std::abs(s));
      }
  return worst;
}

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (double x : row) out(r, c++) = x;
    ++r;
  }
  return out;
}

}  // namespace testing
