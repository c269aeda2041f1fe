#pragma once

// Coordinate maps: the Volterra lift Psi from phase space to u-space, and
// Henon's map from u-space to Toda's Flaschka variables.

#include "kmlab/core_state.hpp"

namespace kmlab {

struct TodaPoint {
  Vector a;  // n-1 off-diagonal variables
  Vector b;  // n diagonal variables
};

/// u_i = w(x, i) = exp(p_i + (q_{i+1} - q_{i-1})/2).
UPoint volterra_map(const PhasePoint& x);
UPoint volterra_map(const Vector& flat);

/// N x M Jacobian of the Volterra map in the flat (q, p) ordering.
Matrix volterra_jacobian(const PhasePoint& x);
Matrix volterra_jacobian(const Vector& flat);

/// a_i = -sqrt(u_{2i} u_{2i-1})/2, b_i = (u_{2i-1} + u_{2i-2})/2, u_0 = 0.
TodaPoint henon_map(const UPoint& u);

/// (2n-1) x N Jacobian of henon_map, rows ordered (a_1..a_{n-1}, b_1..b_n).
/// Needs strictly positive u.
Matrix henon_jacobian(const UPoint& u);

/// Toda equations with a_0 = a_n = 0.
TodaPoint toda_rhs(const TodaPoint& t);

/// || D(henon)(u) km_rhs(u) - toda_rhs(henon(u)) ||_inf.
double conjugacy_residual(const UPoint& u);

Vector stack(const TodaPoint& t);

}  // namespace kmlab
