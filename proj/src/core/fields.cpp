#include "kmlab/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kmlab/error.hpp"

namespace kmlab {

double fd_step(double xc) {
  static const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  return base * std::max(1.0, std::abs(xc));
}

Partials fd_partials(const BivectorField& pi, const Vector& x) {
  require(x.size() == pi.dim, ErrorCode::kDimensionMismatch, "bivector field evaluated at a point of wrong dimension");
  Partials out(static_cast<std::size_t>(pi.dim));
  for (int c = 0; c < pi.dim; ++c) {
    const double h = fd_step(x[c]);
    Vector xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    out[static_cast<std::size_t>(c)] = (pi.eval(xp) - pi.eval(xm)) / (xp[c] - xm[c]);
  }
  return out;
}

Matrix fd_jacobian(const VectorFieldHandle& X, const Vector& x) {
  require(x.size() == X.dim, ErrorCode::kDimensionMismatch, "vector field evaluated at a point of wrong dimension");
  Matrix J(X.dim, X.dim);
  for (int c = 0; c < X.dim; ++c) {
    const double h = fd_step(x[c]);
    Vector xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    J.col(c) = (X.eval(xp) - X.eval(xm)) / (xp[c] - xm[c]);
  }
  return J;
}

Vector fd_gradient(const ScalarField& f, const Vector& x) {
  require(x.size() == f.dim, ErrorCode::kDimensionMismatch, "scalar field evaluated at a point of wrong dimension");
  Vector g(f.dim);
  for (int c = 0; c < f.dim; ++c) {
    const double h = fd_step(x[c]);
    Vector xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    g[c] = (f.eval(xp) - f.eval(xm)) / (xp[c] - xm[c]);
  }
  return g;
}

Partials partials_of(const BivectorField& pi, const Vector& x, DerivativeSource source) {
  if (source == DerivativeSource::kAnalytic && pi.has_partials()) return pi.partials(x);
  return fd_partials(pi, x);
}

Matrix jacobian_of(const VectorFieldHandle& X, const Vector& x, DerivativeSource source) {
  if (source == DerivativeSource::kAnalytic && X.has_jacobian()) return X.jacobian(x);
  return fd_jacobian(X, x);
}

Vector gradient_of(const ScalarField& f, const Vector& x, DerivativeSource source) {
  if (source == DerivativeSource::kAnalytic && f.has_gradient()) return f.gradient(x);
  return fd_gradient(f, x);
}

BivectorField without_partials(BivectorField pi) {
  pi.partials = nullptr;
  pi.label += " [fd]";
  return pi;
}

VectorFieldHandle without_jacobian(VectorFieldHandle X) {
  X.jacobian = nullptr;
  X.label += " [fd]";
  return X;
}

BivectorField sum(const BivectorField& a, const BivectorField& b) {
  require(a.dim == b.dim, ErrorCode::kDimensionMismatch, "cannot add bivector fields of different dimension");
  BivectorField out;
  out.dim = a.dim;
  out.label = a.label + " + " + b.label;
  out.eval = [a, b](const Vector& x) -> Matrix { return a.eval(x) + b.eval(x); };
  if (a.has_partials() && b.has_partials()) {
    out.partials = [a, b](const Vector& x) {
      Partials pa = a.partials(x);
      const Partials pb = b.partials(x);
      for (std::size_t c = 0; c < pa.size(); ++c) pa[c] += pb[c];
      return pa;
    };
  }
  return out;
}

BivectorField scaled(const BivectorField& a, double factor) {
  BivectorField out;
  out.dim = a.dim;
  out.label = std::to_string(factor) + "*" + a.label;
  out.eval = [a, factor](const Vector& x) -> Matrix { return factor * a.eval(x); };
  if (a.has_partials()) {
    out.partials = [a, factor](const Vector& x) {
      Partials pa = a.partials(x);
      for (Matrix& m : pa) m *= factor;
      return pa;
    };
  }
  return out;
}

VectorFieldHandle linear_combination(double alpha, const VectorFieldHandle& X, double beta,
                                     const VectorFieldHandle& Y) {
  require(X.dim == Y.dim, ErrorCode::kDimensionMismatch, "cannot combine vector fields of different dimension");
  VectorFieldHandle out;
  out.dim = X.dim;
  out.label = X.label + " (+) " + Y.label;
  out.eval = [=](const Vector& x) -> Vector { return alpha * X.eval(x) + beta * Y.eval(x); };
  if (X.has_jacobian() && Y.has_jacobian()) {
    out.jacobian = [=](const Vector& x) -> Matrix { return alpha * X.jacobian(x) + beta * Y.jacobian(x); };
  }
  return out;
}

double antisymmetry_defect(const Matrix& A) { return max_abs(Matrix(A + A.transpose())); }

double max_abs(const Matrix& A) { return A.size() == 0 ? 0.0 : A.cwiseAbs().maxCoeff(); }

}  // namespace kmlab
