#pragma once

// Recursion operator R = J3 J2^{-1} and everything generated from it: the
// tensors J_k = R^{k-2} J2, flows X_k = R^{k-1} J2 grad h1, master
// symmetries R^k X0, the lifted Hamiltonians h_k = H_k(Psi(x))/2, and
// measurements of the deformation relations between them.

#include <string>
#include <vector>

#include "kmlab/core_state.hpp"
#include "kmlab/fields.hpp"

namespace kmlab {

/// J3(x) * (-J2), using J2^{-1} = -J2.
Matrix recursion(const PhasePoint& x);
Partials recursion_partials(const PhasePoint& x);

struct MatrixWithPartials {
  Matrix value;
  Partials partials;  // empty unless requested
};

/// R(x)^m with optional partials by the product rule.
MatrixWithPartials recursion_power(const Vector& x, int m, bool with_partials);

/// R^{k-2} J2 for k >= 2.
Matrix tensor_j(int k, const PhasePoint& x);
BivectorField tensor_field(const Dimension& d, int k);

/// h_k = H_k(Psi(x)) / 2, so h1 = sum_i w(i).
double h_k(int k, const PhasePoint& x);
Vector h_gradient(int k, const Vector& x);
Matrix h1_hessian(const Vector& x);
ScalarField h_field(const Dimension& d, int k);

/// R^{k-1} J2 grad h1 for k >= 1.
Vector flow(int k, const PhasePoint& x);
VectorFieldHandle flow_field(const Dimension& d, int k);

/// R^k X0 for k >= 0.
Vector master_x(int k, const PhasePoint& x);
VectorFieldHandle master_field(const Dimension& d, int k);

/// ||pi3 grad H_i - pi2 grad H_{i+1}||_inf / max(1, ||pi2 grad H_{i+1}||_inf).
double lenard_residual_u(int i, const UPoint& u);

/// ||R J2 grad h_i - J2 grad h_{i+1}||_inf.
double lenard_residual_phase(int i, const PhasePoint& x);

enum class RelationKind { kTensor, kHamiltonian, kCommutator };

std::string to_string(RelationKind kind);

struct CoefficientFit {
  RelationKind kind = RelationKind::kTensor;
  int i = 0;
  int j = 0;
  double measured = 0.0;
  double predicted = 0.0;            // signed value of the lattice formula
  double relative_residual = 0.0;    // max_p ||A - cB|| / ||B||
  double scalarity_spread = 0.0;     // max |A_e/B_e - c| over significant entries
  int points = 0;
  bool target_zero = false;          // B vanished everywhere

  double predicted_magnitude() const { return predicted < 0 ? -predicted : predicted; }
  bool scalar(double threshold = 1e-6) const { return scalarity_spread < threshold; }
  bool sign_agrees() const;
};

/// Least-squares fit of lhs = c * target across samples (each pair is one
/// point, flattened).
CoefficientFit fit_coefficient(const std::vector<Vector>& lhs, const std::vector<Vector>& target);

/// L_{X_i} J_j against J_{i+j}; predicted (j - i - 2).
CoefficientFit deformation_coeff(int i, int j, const std::vector<PhasePoint>& points,
                                 DerivativeSource source = DerivativeSource::kAnalytic);

/// Same relation with an arbitrary field in place of R^i X0.
CoefficientFit deformation_coeff_with(const VectorFieldHandle& X, int i, int j,
                                      const std::vector<PhasePoint>& points,
                                      DerivativeSource source = DerivativeSource::kAnalytic);

/// X_i(h_j) against h_{i+j}; predicted (i + j).
CoefficientFit ham_deformation_check(int i, int j, const std::vector<PhasePoint>& points,
                                     DerivativeSource source = DerivativeSource::kAnalytic);

/// [X_i, X_j] against X_{i+j}; predicted (j - i).
CoefficientFit master_commutator_check(int i, int j, const std::vector<PhasePoint>& points,
                                       DerivativeSource source = DerivativeSource::kAnalytic);

/// ||[X_i, X_j](x)||_inf / max(1, ||X_i|| ||X_j||) for the flows.
double flow_commutator_residual(int i, int j, const PhasePoint& x,
                                DerivativeSource source = DerivativeSource::kAnalytic);

/// |grad h_i^T J_k grad h_j|.
double involutivity_residual(int i, int j, int k, const PhasePoint& x);

/// With c = j + 1 and Y = R^i X0 + t c X_{i+j}: ||c X_{i+j} + [Y, X_j]||_inf.
double time_dependent_symmetry_residual(int i, int j, double t, const PhasePoint& x,
                                        DerivativeSource source = DerivativeSource::kAnalytic);

/// Y = R^i X0 + t c X_{i+j} with the constant c supplied, checked against the
/// symmetry condition dY/dt + DY X_j - DX_j Y = 0. Returns the sup norm.
double time_dependent_symmetry_defect(int i, int j, double t, double c, const PhasePoint& x,
                                      DerivativeSource source = DerivativeSource::kAnalytic);

/// [R^i X0, X_j] against the flow X_{i+j}; predicted mu + (j-1)(mu - lambda) = j.
CoefficientFit master_flow_bracket_check(int i, int j, const std::vector<PhasePoint>& points,
                                         DerivativeSource source = DerivativeSource::kAnalytic);

struct MasterX1Comparison {
  double difference = 0.0;   // ||R X0 - X1||_inf
  double commutator = 0.0;   // ||[R X0 - X1, X_1]||_inf
};

MasterX1Comparison compare_master_x1(const PhasePoint& x);

}  // namespace kmlab
