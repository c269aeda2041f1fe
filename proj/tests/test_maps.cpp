#include <doctest.h>

#include <cmath>

#include "kmlab/error.hpp"
#include "kmlab/hierarchy.hpp"
#include "kmlab/lax.hpp"
#include "kmlab/maps.hpp"
#include "support.hpp"

using namespace kmlab;
using testing::vec;

TEST_CASE("volterra_map hand values") {
  CHECK(volterra_map(PhasePoint::origin(dims(2))).u == vec({1, 1, 1}));
  const UPoint u = volterra_map(PhasePoint{vec({1, 0, -1}), vec({0, 0, 0})});
  CHECK(u.u[0] == doctest::Approx(1.0));
  CHECK(u.u[1] == doctest::Approx(std::exp(-1.0)));
  CHECK(u.u[2] == doctest::Approx(1.0));
}

TEST_CASE("volterra_map output is positive") {
  for (const PhasePoint& x : sample_phase(SampleSpec{2, 50, {Box{-4, 4}}}, dims(3)))
    CHECK(volterra_map(x).u.minCoeff() > 0.0);
}

TEST_CASE("volterra_jacobian at the origin") {
  const Matrix J = volterra_jacobian(PhasePoint::origin(dims(2)));
  REQUIRE(J.rows() == 3);
  REQUIRE(J.cols() == 6);
  // row 1: du1/dq2 = 1/2, du1/dp1 = 1
  CHECK(J(0, 1) == 0.5);
  CHECK(J(0, 3) == 1.0);
  CHECK(J(0, 0) == 0.0);
  CHECK(J(0, 2) == 0.0);
  CHECK(J(0, 4) == 0.0);
  CHECK(J(0, 5) == 0.0);
  // row 2: du2/dq1 = -1/2, du2/dq3 = 1/2
  CHECK(J(1, 0) == -0.5);
  CHECK(J(1, 2) == 0.5);
  CHECK(J(1, 4) == 1.0);
}

TEST_CASE("volterra_jacobian p-block is diagonal and matches finite differences") {
  const Dimension d = dims(3);
  for (const PhasePoint& x : sample_phase(SampleSpec{12, 10, {}}, d)) {
    const Matrix J = volterra_jacobian(x);
    for (int i = 0; i < d.N; ++i)
      for (int j = 0; j < d.N; ++j)
        if (i != j) CHECK(J(i, d.N + j) == 0.0);
    const Matrix fd = testing::jacobian_fd([](const Vector& v) { return volterra_map(v).u; }, x.flat());
    CHECK(max_abs(Matrix(J - fd)) < 1e-8);
  }
}

TEST_CASE("henon_map hand values") {
  const TodaPoint t = henon_map(UPoint{vec({1, 2, 3})});
  REQUIRE(t.a.size() == 1);
  REQUIRE(t.b.size() == 2);
  CHECK(t.a[0] == doctest::Approx(-std::sqrt(2.0) / 2));
  CHECK(t.b[0] == doctest::Approx(0.5));
  CHECK(t.b[1] == doctest::Approx(2.5));

  const TodaPoint s = henon_map(UPoint{vec({1, 1, 1})});
  CHECK(s.a[0] == doctest::Approx(-0.5));
  CHECK(s.b[0] == doctest::Approx(0.5));
  CHECK(s.b[1] == doctest::Approx(1.0));

  CHECK(henon_map(UPoint{vec({1, 0, 1})}).a[0] == 0.0);
}

TEST_CASE("henon_map rejects negative u") {
  CHECK_THROWS_AS(henon_map(UPoint{vec({1, -2, 3})}), Error);
  try {
    henon_map(UPoint{vec({-1, 2, 3})});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDomain);
  }
}

TEST_CASE("henon_jacobian matches finite differences") {
  const Dimension d = dims(3);
  const UPoint u = sample_u(SampleSpec{6, 1, {}}, d).front();
  const Matrix fd = testing::jacobian_fd([](const Vector& v) { return stack(henon_map(UPoint{v})); }, u.u, 1e-4);
  CHECK(max_abs(Matrix(henon_jacobian(u) - fd)) < 1e-9);
}

TEST_CASE("toda_rhs hand values") {
  const TodaPoint zero = toda_rhs(TodaPoint{vec({0}), vec({3, -1})});
  CHECK(zero.a == vec({0}));
  CHECK(zero.b == vec({0, 0}));

  const TodaPoint r = toda_rhs(TodaPoint{vec({-0.5}), vec({0.5, 1})});
  CHECK(r.a[0] == doctest::Approx(-0.25));
  CHECK(r.b[0] == doctest::Approx(0.5));
  CHECK(r.b[1] == doctest::Approx(-0.5));

  const TodaPoint s = toda_rhs(TodaPoint{vec({-std::sqrt(2.0) / 2}), vec({0.5, 2.5})});
  CHECK(s.a[0] == doctest::Approx(-std::sqrt(2.0)));
  CHECK(s.b[0] == doctest::Approx(1.0));
  CHECK(s.b[1] == doctest::Approx(-1.0));
}

TEST_CASE("Henon map intertwines KM and Toda flows") {
  CHECK(conjugacy_residual(UPoint{vec({1, 1, 1})}) < 1e-15);
  CHECK(conjugacy_residual(UPoint{vec({1, 2, 3})}) < 1e-14);
  for (int n : {2, 3, 5}) {
    double worst = 0.0;
    for (const UPoint& u : sample_u(SampleSpec{200 + static_cast<std::uint64_t>(n), 100, {}}, dims(n)))
      worst = std::max(worst, conjugacy_residual(u));
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("lifted flow projects to the KM flow") {
  for (int n : {1, 2, 3}) {
    for (const PhasePoint& x : sample_phase(SampleSpec{8, 20, {}}, dims(n))) {
      const Vector lhs = volterra_jacobian(x) * flow(1, x);
      const Vector rhs = km_rhs(volterra_map(x));
      CHECK(max_abs(Vector(lhs - rhs)) < 1e-12);
    }
  }
}
