#pragma once

// Bivector, vector and scalar fields on R^dim with optional analytic
// derivatives. Anything without an analytic derivative is differentiated by
// central differences with step cbrt(eps) * max(1, |x_c|).

#include <functional>
#include <string>
#include <vector>

#include "kmlab/core_state.hpp"

namespace kmlab {

/// partials[c] is the matrix d(pi)/d(x_c).
using Partials = std::vector<Matrix>;

/// Poisson-tensor candidate. Matrix convention: entry (a, b) = {x_a, x_b}.
struct BivectorField {
  int dim = 0;
  std::function<Matrix(const Vector&)> eval;
  std::function<Partials(const Vector&)> partials;  // optional
  std::string label;

  bool has_partials() const { return static_cast<bool>(partials); }
};

struct VectorFieldHandle {
  int dim = 0;
  std::function<Vector(const Vector&)> eval;
  std::function<Matrix(const Vector&)> jacobian;  // optional, (a, c) = dX^a/dx_c
  std::string label;

  bool has_jacobian() const { return static_cast<bool>(jacobian); }
};

struct ScalarField {
  int dim = 0;
  std::function<double(const Vector&)> eval;
  std::function<Vector(const Vector&)> gradient;  // optional
  std::string label;

  bool has_gradient() const { return static_cast<bool>(gradient); }
};

enum class DerivativeSource { kAnalytic, kFiniteDifference };

double fd_step(double xc);

Partials fd_partials(const BivectorField& pi, const Vector& x);
Matrix fd_jacobian(const VectorFieldHandle& X, const Vector& x);
Vector fd_gradient(const ScalarField& f, const Vector& x);

/// Analytic derivative when present and requested, central differences otherwise.
Partials partials_of(const BivectorField& pi, const Vector& x,
                     DerivativeSource source = DerivativeSource::kAnalytic);
Matrix jacobian_of(const VectorFieldHandle& X, const Vector& x,
                   DerivativeSource source = DerivativeSource::kAnalytic);
Vector gradient_of(const ScalarField& f, const Vector& x,
                   DerivativeSource source = DerivativeSource::kAnalytic);

/// Same field with its analytic partials dropped, so every consumer falls
/// back to finite differences.
BivectorField without_partials(BivectorField pi);
VectorFieldHandle without_jacobian(VectorFieldHandle X);

BivectorField sum(const BivectorField& a, const BivectorField& b);
BivectorField scaled(const BivectorField& a, double factor);
VectorFieldHandle linear_combination(double alpha, const VectorFieldHandle& X, double beta,
                                     const VectorFieldHandle& Y);

/// max |A + A^T|.
double antisymmetry_defect(const Matrix& A);

double max_abs(const Matrix& A);
inline double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace kmlab
