#include "kmlab/symmetries.hpp"

#include <algorithm>
#include <cmath>

#include "kmlab/error.hpp"
#include "kmlab/hierarchy.hpp"
#include "kmlab/poisson.hpp"

namespace kmlab {

int CMatrix::operator()(int i, int j) const {
  const int N = 2 * n - 1;
  if (i < 1 || i > N || j < 1 || j > N) return 0;
  return entries(i - 1, j - 1);
}

CMatrix c_matrix(int n) {
  const Dimension d = dims(n);
  CMatrix C{n, Eigen::MatrixXi::Zero(d.N, d.N)};
  for (int i = 1; i <= d.N; ++i) {
    for (int j = 1; j < i; ++j) C.entries(i - 1, j - 1) = -1;
    C.entries(i - 1, i - 1) = i - 1;
  }
  return C;
}

Vector euler_y0(const UPoint& u) { return u.u; }

Vector master_y1(const UPoint& u) {
  const int N = u.size();
  Vector U(N);
  for (int i = 1; i <= N; ++i) {
    const double ui = u.u[i - 1];
    U[i - 1] = (i + 1) * ui * u_ext(u, i + 1) + ui * ui + (2 - i) * u_ext(u, i - 1) * ui;
  }
  return U;
}

Matrix master_y1_jacobian(const UPoint& u) {
  const int N = u.size();
  Matrix J = Matrix::Zero(N, N);
  for (int i = 1; i <= N; ++i) {
    const double ui = u.u[i - 1];
    J(i - 1, i - 1) = (i + 1) * u_ext(u, i + 1) + 2 * ui + (2 - i) * u_ext(u, i - 1);
    if (i + 1 <= N) J(i - 1, i) = (i + 1) * ui;
    if (i - 1 >= 1) J(i - 1, i - 2) = (2 - i) * ui;
  }
  return J;
}

Vector x0(const PhasePoint& x) {
  const int N = x.size();
  Vector v(2 * N);
  v << Vector::Zero(N), Vector::Ones(N);
  return v;
}

Matrix x1_coefficients(const Dimension& d) {
  const int N = d.N;
  const CMatrix C = c_matrix(d.n);
  Matrix coef = Matrix::Zero(d.M, N);
  for (int i = 1; i <= N; ++i) {
    // A_i = sum_j c_{j,i} w(j)
    for (int j = 1; j <= N; ++j) coef(i - 1, j - 1) = C(j, i);
    // B_i = (i+1) w(i+1) + w(i) + (2-i) w(i-1) + 1/2 sum_j (c_{j,i-1} - c_{j,i+1}) w(j)
    const int row = N + i - 1;
    if (i + 1 <= N) coef(row, i) += i + 1;
    coef(row, i - 1) += 1.0;
    if (i - 1 >= 1) coef(row, i - 2) += 2 - i;
    for (int j = 1; j <= N; ++j) coef(row, j - 1) += 0.5 * (C(j, i - 1) - C(j, i + 1));
  }
  return coef;
}

Vector x1(const PhasePoint& x) {
  return x1_coefficients(dims_for_size(x.size())) * w_vector(x.flat());
}

Matrix x1_jacobian(const PhasePoint& x) {
  const int N = x.size();
  const Vector wv = w_vector(x.flat());
  return x1_coefficients(dims_for_size(N)) * wv.asDiagonal() * w_exponent_gradients(N);
}

VectorFieldHandle y0_field(const Dimension& d) {
  const int N = d.N;
  return VectorFieldHandle{N, [](const Vector& u) { return euler_y0(UPoint{u}); },
                           [N](const Vector&) -> Matrix { return Matrix::Identity(N, N); }, "Y0"};
}

VectorFieldHandle y1_field(const Dimension& d) {
  return VectorFieldHandle{d.N, [](const Vector& u) { return master_y1(UPoint{u}); },
                           [](const Vector& u) { return master_y1_jacobian(UPoint{u}); }, "Y1"};
}

VectorFieldHandle x0_field(const Dimension& d) {
  const int M = d.M;
  return VectorFieldHandle{M, [](const Vector& x) { return x0(PhasePoint::from_flat(x)); },
                           [M](const Vector&) -> Matrix { return Matrix::Zero(M, M); }, "X0"};
}

VectorFieldHandle x1_field(const Dimension& d) {
  return VectorFieldHandle{d.M, [](const Vector& x) { return x1(PhasePoint::from_flat(x)); },
                           [](const Vector& x) { return x1_jacobian(PhasePoint::from_flat(x)); }, "X1"};
}

namespace {

struct ScalarFitResult {
  double value = 0.0;
  double residual = 0.0;
  bool exact_zero = false;
};

ScalarFitResult fit_matrices(const std::vector<Matrix>& lhs, const std::vector<Matrix>& target) {
  double num = 0.0;
  double den = 0.0;
  double lhs_max = 0.0;
  for (std::size_t k = 0; k < lhs.size(); ++k) {
    num += (lhs[k].array() * target[k].array()).sum();
    den += target[k].squaredNorm();
    lhs_max = std::max(lhs_max, max_abs(lhs[k]));
  }
  ScalarFitResult r;
  if (lhs_max == 0.0) {
    r.exact_zero = true;
    return r;
  }
  r.value = den > 0.0 ? num / den : 0.0;
  for (std::size_t k = 0; k < lhs.size(); ++k) {
    const double scale = std::max(max_abs(target[k]), max_abs(lhs[k]));
    r.residual = std::max(r.residual, max_abs(Matrix(lhs[k] - r.value * target[k])) / scale);
  }
  return r;
}

}  // namespace

ConformalConstants conformal_constants(const std::vector<PhasePoint>& points) {
  require(points.size() >= 2, ErrorCode::kInvalidArgument, "conformal_constants needs at least 2 points");
  const Dimension d = dims_for_size(points.front().size());
  const VectorFieldHandle X0 = x0_field(d);
  const BivectorField J2 = j2_field(d);
  const BivectorField J3 = j3_field(d);
  const ScalarField h1 = h_field(d, 1);

  std::vector<Matrix> lie2, t2, lie3, t3, lieh, th;
  for (const PhasePoint& p : points) {
    const Vector x = p.flat();
    lie2.push_back(lie_derivative_bivector(X0, J2, x));
    t2.push_back(J2.eval(x));
    lie3.push_back(lie_derivative_bivector(X0, J3, x));
    t3.push_back(J3.eval(x));
    lieh.push_back(Matrix::Constant(1, 1, vf_apply_scalar(X0, h1, x)));
    th.push_back(Matrix::Constant(1, 1, h1.eval(x)));
  }
  ConformalConstants out;
  const ScalarFitResult l = fit_matrices(lie2, t2);
  const ScalarFitResult m = fit_matrices(lie3, t3);
  const ScalarFitResult v = fit_matrices(lieh, th);
  out.lambda = l.value;
  out.lambda_exact_zero = l.exact_zero;
  out.lambda_residual = l.residual;
  out.mu = m.value;
  out.mu_residual = m.residual;
  out.nu = v.value;
  out.nu_residual = v.residual;
  return out;
}

Vector vf_lie_bracket(const VectorFieldHandle& X, const VectorFieldHandle& Y, const Vector& x,
                      DerivativeSource source) {
  require(X.dim == Y.dim && x.size() == X.dim, ErrorCode::kDimensionMismatch, "vf_lie_bracket: dimension mismatch");
  return jacobian_of(Y, x, source) * X.eval(x) - jacobian_of(X, x, source) * Y.eval(x);
}

double vf_apply_scalar(const VectorFieldHandle& X, const ScalarField& f, const Vector& x, DerivativeSource source) {
  require(X.dim == f.dim && x.size() == X.dim, ErrorCode::kDimensionMismatch, "vf_apply_scalar: dimension mismatch");
  return X.eval(x).dot(gradient_of(f, x, source));
}

}  // namespace kmlab
