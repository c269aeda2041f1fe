#include "kmlab/maps.hpp"

#include <cmath>

#include "kmlab/error.hpp"
#include "kmlab/fields.hpp"
#include "kmlab/lax.hpp"

namespace kmlab {

UPoint volterra_map(const Vector& flat) {
  const int N = static_cast<int>(flat.size() / 2);
  Vector u(N);
  for (int i = 1; i <= N; ++i) u[i - 1] = w(flat, i);
  return UPoint{u};
}

UPoint volterra_map(const PhasePoint& x) { return volterra_map(x.flat()); }

Matrix volterra_jacobian(const Vector& flat) {
  const int N = static_cast<int>(flat.size() / 2);
  const int M = 2 * N;
  Matrix D = Matrix::Zero(N, M);
  for (int i = 1; i <= N; ++i) {
    const double wi = w(flat, i);
    for (int c = 0; c < M; ++c) D(i - 1, c) = w_log_partial(N, i, c) * wi;
  }
  return D;
}

Matrix volterra_jacobian(const PhasePoint& x) { return volterra_jacobian(x.flat()); }

namespace {

int lattice_n(const UPoint& u) {
  require(u.size() % 2 == 1, ErrorCode::kInvalidDimension, "u-space dimension must be odd");
  return (u.size() + 1) / 2;
}

}  // namespace

TodaPoint henon_map(const UPoint& u) {
  const int n = lattice_n(u);
  for (int i = 0; i < u.size(); ++i) {
    if (u.u[i] < 0.0) fail(ErrorCode::kDomain, "henon_map needs u >= 0");
  }
  TodaPoint t{Vector(n - 1), Vector(n)};
  for (int i = 1; i <= n - 1; ++i) t.a[i - 1] = -0.5 * std::sqrt(u_ext(u, 2 * i) * u_ext(u, 2 * i - 1));
  for (int i = 1; i <= n; ++i) t.b[i - 1] = 0.5 * (u_ext(u, 2 * i - 1) + u_ext(u, 2 * i - 2));
  return t;
}

Matrix henon_jacobian(const UPoint& u) {
  const int n = lattice_n(u);
  const int N = u.size();
  for (int i = 0; i < N; ++i) {
    if (!(u.u[i] > 0.0)) fail(ErrorCode::kDomain, "henon_jacobian needs strictly positive u");
  }
  Matrix D = Matrix::Zero(2 * n - 1, N);
  for (int i = 1; i <= n - 1; ++i) {
    const double even = u_ext(u, 2 * i);
    const double odd = u_ext(u, 2 * i - 1);
    D(i - 1, 2 * i - 1) = -0.25 * std::sqrt(odd / even);  // d/du_{2i}
    D(i - 1, 2 * i - 2) = -0.25 * std::sqrt(even / odd);  // d/du_{2i-1}
  }
  for (int i = 1; i <= n; ++i) {
    const int row = n - 1 + i - 1;
    D(row, 2 * i - 2) = 0.5;
    if (2 * i - 2 >= 1) D(row, 2 * i - 3) = 0.5;
  }
  return D;
}

TodaPoint toda_rhs(const TodaPoint& t) {
  const Eigen::Index n = t.b.size();
  require(t.a.size() == n - 1, ErrorCode::kDimensionMismatch, "Toda point needs n-1 off-diagonal entries");
  auto a = [&](Eigen::Index i) { return (i >= 1 && i <= n - 1) ? t.a[i - 1] : 0.0; };
  TodaPoint d{Vector(n - 1), Vector(n)};
  for (Eigen::Index i = 1; i <= n - 1; ++i) d.a[i - 1] = a(i) * (t.b[i] - t.b[i - 1]);
  for (Eigen::Index i = 1; i <= n; ++i) d.b[i - 1] = 2.0 * (a(i) * a(i) - a(i - 1) * a(i - 1));
  return d;
}

Vector stack(const TodaPoint& t) {
  Vector v(t.a.size() + t.b.size());
  v << t.a, t.b;
  return v;
}

double conjugacy_residual(const UPoint& u) {
  const Vector lhs = henon_jacobian(u) * km_rhs(u);
  const Vector rhs = stack(toda_rhs(henon_map(u)));
  return max_abs(Vector(lhs - rhs));
}

}  // namespace kmlab
