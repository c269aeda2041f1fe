#include <doctest.h>

#include <cmath>

#include "kmlab/error.hpp"
#include "kmlab/hierarchy.hpp"
#include "kmlab/lax.hpp"
#include "kmlab/poisson.hpp"
#include "kmlab/symmetries.hpp"
#include "support.hpp"

using namespace kmlab;
using testing::vec;

namespace {

ScalarField invariant_field(const Dimension& d, int k) {
  return ScalarField{d.N, [k](const Vector& u) { return invariants(UPoint{u}, k).back(); },
                     [k](const Vector& u) { return invariant_gradient(UPoint{u}, k); }, "H" + std::to_string(k)};
}

// Explicit X1 straight from its component formulas.
Vector x1_by_formula(const PhasePoint& x) {
  const int N = x.size();
  const int n = (N + 1) / 2;
  auto c = [&](int i, int j) -> double {
    if (j < 1 || j > N) return 0.0;
    if (j > i) return 0.0;
    return j == i ? i - 1 : -1;
  };
  auto W = [&](int i) { return w(x, i); };
  Vector out(2 * N);
  for (int i = 1; i <= N; ++i) {
    double A = 0.0;
    for (int j = 1; j <= N; ++j) A += c(j, i) * W(j);
    double B = (i + 1) * W(i + 1) + W(i) + (2 - i) * W(i - 1);
    for (int j = 1; j <= N; ++j) B += 0.5 * (c(j, i - 1) - c(j, i + 1)) * W(j);
    out[i - 1] = A;
    out[N + i - 1] = B;
  }
  (void)n;
  return out;
}

}  // namespace

TEST_CASE("Euler field Y0 is the identity on coordinates") {
  CHECK(euler_y0(UPoint{vec({1, 1, 1})}) == vec({1, 1, 1}));
  CHECK(euler_y0(UPoint{vec({0, 0, 0})}) == vec({0, 0, 0}));
  CHECK(euler_y0(UPoint{vec({0.3, 2, -1})}) == vec({0.3, 2, -1}));
}

TEST_CASE("Y1 hand values") {
  CHECK(master_y1(UPoint{vec({1, 1, 1})}) == vec({3, 4, 0}));
  CHECK(master_y1(UPoint{vec({0, 0, 0})}) == vec({0, 0, 0}));
  // u = (1,2,3): U1 = 2*1*2 + 1 = 5, U2 = 3*2*3 + 4 + 0 = 22, U3 = 0 + 9 - 1*2*3 = 3
  CHECK(master_y1(UPoint{vec({1, 2, 3})}) == vec({5, 22, 3}));
}

TEST_CASE("Y1 Jacobian matches finite differences") {
  const Dimension d = dims(3);
  for (const UPoint& u : sample_u(SampleSpec{1, 5, {}}, d)) {
    const Matrix fd = testing::jacobian_fd([](const Vector& v) { return master_y1(UPoint{v}); }, u.u);
    CHECK(max_abs(Matrix(master_y1_jacobian(u) - fd)) < 1e-10);
  }
}

TEST_CASE("C matrix for n = 2") {
  const CMatrix C = c_matrix(2);
  const Eigen::MatrixXi expected = (Eigen::MatrixXi(3, 3) << 0, 0, 0, -1, 1, 0, -1, -1, 2).finished();
  CHECK(C.entries == expected);
  const Eigen::RowVectorXi sums = C.entries.colwise().sum();
  CHECK(sums == (Eigen::RowVectorXi(3) << -2, 0, 2).finished());
}

TEST_CASE("C matrix invariants for all n") {
  for (int n = 1; n <= 6; ++n) {
    const CMatrix C = c_matrix(n);
    const int N = 2 * n - 1;
    for (int i = 1; i <= N; ++i) {
      CHECK(C(i, 0) == 0);
      CHECK(C(i, 2 * n) == 0);
      for (int j = 1; j <= N; ++j) {
        if (j > i) CHECK(C(i, j) == 0);
        if (j < i) CHECK(C(i, j) == -1);
        if (j == i) CHECK(C(i, j) == i - 1);
      }
    }
    for (int j = 1; j <= N; ++j) CHECK(C(1, j) == 0);
  }
  CHECK_THROWS_AS(c_matrix(0), Error);
}

TEST_CASE("X0 is the constant field sum d/dp_i") {
  const Dimension d = dims(2);
  for (const PhasePoint& x : sample_phase(SampleSpec{2, 3, {}}, d)) CHECK(x0(x) == vec({0, 0, 0, 1, 1, 1}));
  CHECK(x0_field(d).jacobian(Vector::Zero(6)).isZero(0.0));
}

TEST_CASE("X1 at the origin") {
  const Vector X = x1(PhasePoint::origin(dims(2)));
  CHECK(X == vec({-2, 0, 2, 3, 2, 0}));
}

TEST_CASE("X1 matches its component formulas and finite-difference Jacobian") {
  for (int n : {1, 2, 3, 5}) {
    const Dimension d = dims(n);
    for (const PhasePoint& x : sample_phase(SampleSpec{3, 10, {}}, d)) {
      CHECK(max_abs(Vector(x1(x) - x1_by_formula(x))) < 1e-13);
      const Matrix fd = testing::jacobian_fd([](const Vector& v) { return x1(PhasePoint::from_flat(v)); }, x.flat());
      CHECK(max_abs(Matrix(x1_jacobian(x) - fd)) < 1e-8);
    }
  }
}

TEST_CASE("conformal constants are (0, 1, 1)") {
  const ConformalConstants c = conformal_constants(sample_phase(SampleSpec{4, 20, {}}, dims(2)));
  CHECK(c.lambda == 0.0);
  CHECK(c.lambda_exact_zero);
  CHECK(std::abs(c.mu - 1.0) < 1e-10);
  CHECK(std::abs(c.nu - 1.0) < 1e-10);
  CHECK(c.mu_residual < 1e-10);
  CHECK(c.nu_residual < 1e-10);
  CHECK_THROWS_AS(conformal_constants({PhasePoint::origin(dims(2))}), Error);
}

TEST_CASE("vector-field bracket basics") {
  const Dimension d = dims(2);
  const Vector x = sample_points(SampleSpec{5, 1, {}}, d, Space::kPhase).front();
  CHECK(vf_lie_bracket(x1_field(d), x1_field(d), x).isZero(1e-14));
  CHECK(vf_lie_bracket(x0_field(d), x0_field(d), x).isZero(0.0));
  // [X, Y] = DY X - DX Y against an independent finite-difference evaluation.
  const Matrix DX1 = testing::jacobian_fd([](const Vector& v) { return x1(PhasePoint::from_flat(v)); }, x);
  const Vector ref = DX1 * x0_field(d).eval(x);  // DX0 = 0
  CHECK(max_abs(Vector(vf_lie_bracket(x0_field(d), x1_field(d), x) - ref)) < 1e-9);
}

TEST_CASE("[Y0, Y1] = Y1 since Y1 is homogeneous quadratic") {
  const Dimension d = dims(3);
  for (const UPoint& u : sample_u(SampleSpec{6, 10, {}}, d)) {
    const Vector b = vf_lie_bracket(y0_field(d), y1_field(d), u.u);
    CHECK(max_abs(Vector(b - master_y1(u))) < 1e-14);
    const Vector bfd = vf_lie_bracket(y0_field(d), y1_field(d), u.u, DerivativeSource::kFiniteDifference);
    CHECK(max_abs(Vector(bfd - master_y1(u))) < 1e-6);
  }
}

TEST_CASE("Y_i(H_j) = (i + j) H_{i+j}") {
  for (int n : {2, 3}) {
    const Dimension d = dims(n);
    for (const UPoint& u : sample_u(SampleSpec{7, 20, {}}, d)) {
      for (int j = 1; j <= 3; ++j) {
        const double Hj = invariants(u, j).back();
        const double Hj1 = invariants(u, j + 1).back();
        CHECK(vf_apply_scalar(y0_field(d), invariant_field(d, j), u.u) == doctest::Approx(j * Hj).epsilon(1e-12));
        CHECK(vf_apply_scalar(y1_field(d), invariant_field(d, j), u.u) ==
              doctest::Approx((1 + j) * Hj1).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("X0(h1) = h1") {
  const Dimension d = dims(2);
  for (const PhasePoint& x : sample_phase(SampleSpec{8, 20, {}}, d))
    CHECK(vf_apply_scalar(x0_field(d), h_field(d, 1), x.flat()) == doctest::Approx(h_k(1, x)).epsilon(1e-14));
}
