#pragma once

// Poisson tensors of the KM lattice and the generic bivector calculus.
//
// u-space: pi2 (quadratic) and pi3 (cubic). Phase space: the canonical J2
// and the cubic-lift J3. J3 has two constructions: j3_oracle builds it from
// the master symmetry X1 (J3 = -L_{X1} J2, the sign that pushes forward to
// +pi3) and j3_closed transcribes the explicit bracket list. The oracle is
// authoritative; the closed form is a cross-check.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "kmlab/core_state.hpp"
#include "kmlab/fields.hpp"

namespace kmlab {

Matrix pi2(const UPoint& u);
Partials pi2_partials(const UPoint& u);
BivectorField pi2_field(const Dimension& d);

Matrix pi3(const UPoint& u);
Partials pi3_partials(const UPoint& u);
BivectorField pi3_field(const Dimension& d);

/// [[0, I], [-I, 0]] in the (q, p) ordering.
Matrix j2(const Dimension& d);
BivectorField j2_field(const Dimension& d);

Matrix j3_closed(const PhasePoint& x);
Partials j3_closed_partials(const PhasePoint& x);
BivectorField j3_closed_field(const Dimension& d);

/// D J2 + J2 D^T with D the analytic Jacobian of X1; equals -(L_{X1} J2).
Matrix j3_oracle(const PhasePoint& x);
Partials j3_oracle_partials(const PhasePoint& x);
/// The authoritative J3 (oracle construction, analytic partials).
BivectorField j3_field(const Dimension& d);

/// pi(x) * grad(x).
Vector ham_vf(const BivectorField& pi, const std::function<Vector(const Vector&)>& grad, const Vector& x);

/// grad f^T pi grad g.
double bracket(const ScalarField& f, const ScalarField& g, const BivectorField& pi, const Vector& x,
               DerivativeSource source = DerivativeSource::kAnalytic);

struct JacobiOptions {
  DerivativeSource source = DerivativeSource::kAnalytic;
  int full_dim_limit = 12;   // all triples at or below this dimension
  int max_triples = 2000;    // sampled triples above it (when C(dim,3) exceeds this)
  std::uint64_t seed = 0;
};

/// max over a<b<c of |sum_d pi^{ad} d_d pi^{bc} + cyclic|.
double jacobi_residual(const BivectorField& pi, const Vector& x, const JacobiOptions& options = {});

/// Jacobi residual of the pointwise sum piA + piB.
double compatibility_residual(const BivectorField& a, const BivectorField& b, const Vector& x,
                              const JacobiOptions& options = {});

/// || DPsi(x) J(x) DPsi(x)^T - target(Psi(x)) ||_inf.
double pushforward_residual(const PhasePoint& x, const BivectorField& J, const BivectorField& target);

/// (L_X pi)^{ab} = X^c d_c pi^{ab} - pi^{cb} d_c X^a - pi^{ac} d_c X^b.
Matrix lie_derivative_bivector(const VectorFieldHandle& X, const BivectorField& pi, const Vector& x,
                               DerivativeSource source = DerivativeSource::kAnalytic);

/// "q3", "p1", ... for a flat phase-space index.
std::string coordinate_name(int N, int flat_index);

struct J3Discrepancy {
  std::string row;
  std::string col;
  double max_difference = 0.0;
};

/// Upper-triangle entries where j3_closed and j3_oracle differ by more than
/// `tol` at any of the points, in row-major order.
std::vector<J3Discrepancy> j3_discrepancies(const std::vector<PhasePoint>& points, double tol = 1e-10);

}  // namespace kmlab
