#pragma once

// Symmetry vector fields: the Euler field Y0 and master symmetry Y1 on
// u-space, the conformal symmetry X0 and the lifted master symmetry X1 on
// phase space, plus vector-field calculus.

#include <vector>

#include "kmlab/core_state.hpp"
#include "kmlab/fields.hpp"

namespace kmlab {

/// Constant lower-triangular integer matrix used by X1. 1-based access;
/// columns 0 and 2n read as zero.
struct CMatrix {
  int n = 1;
  Eigen::MatrixXi entries;

  int operator()(int i, int j) const;
};

CMatrix c_matrix(int n);

Vector euler_y0(const UPoint& u);

/// U_i = (i+1) u_i u_{i+1} + u_i^2 + (2-i) u_{i-1} u_i.
Vector master_y1(const UPoint& u);
Matrix master_y1_jacobian(const UPoint& u);

/// sum_i d/dp_i.
Vector x0(const PhasePoint& x);

/// M x N coefficients with X1^a(x) = sum_k coef(a, k-1) w(x, k).
Matrix x1_coefficients(const Dimension& d);
Vector x1(const PhasePoint& x);
Matrix x1_jacobian(const PhasePoint& x);

VectorFieldHandle y0_field(const Dimension& d);
VectorFieldHandle y1_field(const Dimension& d);
VectorFieldHandle x0_field(const Dimension& d);
VectorFieldHandle x1_field(const Dimension& d);

struct ConformalConstants {
  double lambda = 0.0;
  double mu = 0.0;
  double nu = 0.0;
  bool lambda_exact_zero = false;  // L_{X0} J2 vanished identically
  double lambda_residual = 0.0;
  double mu_residual = 0.0;
  double nu_residual = 0.0;
};

/// Least-squares fits of L_{X0} J2 = lambda J2, L_{X0} J3 = mu J3 and
/// X0(h1) = nu h1 over the points. Residuals are max relative.
ConformalConstants conformal_constants(const std::vector<PhasePoint>& points);

/// [X, Y](x) = DY(x) X(x) - DX(x) Y(x).
Vector vf_lie_bracket(const VectorFieldHandle& X, const VectorFieldHandle& Y, const Vector& x,
                      DerivativeSource source = DerivativeSource::kAnalytic);

/// X(x) . grad f(x).
double vf_apply_scalar(const VectorFieldHandle& X, const ScalarField& f, const Vector& x,
                       DerivativeSource source = DerivativeSource::kAnalytic);

}  // namespace kmlab
