#include <doctest.h>

#include <cmath>

#include "kmlab/core_state.hpp"
#include "kmlab/error.hpp"
#include "support.hpp"

using namespace kmlab;
using testing::vec;

TEST_CASE("dims follows N = 2n-1, M = 2N, lax_size = 2n") {
  CHECK(dims(2) == Dimension{2, 3, 6, 4});
  CHECK(dims(3) == Dimension{3, 5, 10, 6});
  CHECK(dims(1) == Dimension{1, 1, 2, 2});
  for (int n = 1; n <= 8; ++n) {
    const Dimension d = dims(n);
    CHECK(d.N == 2 * n - 1);
    CHECK(d.M == 2 * d.N);
    CHECK(d.lax_size == 2 * n);
  }
}

TEST_CASE("dims rejects n < 1") {
  CHECK_THROWS_AS(dims(0), Error);
  CHECK_THROWS_AS(dims(-3), Error);
  try {
    dims(0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidDimension);
  }
}

TEST_CASE("dims_for_size accepts only odd sizes") {
  CHECK(dims_for_size(5) == dims(3));
  CHECK_THROWS_AS(dims_for_size(4), Error);
  CHECK_THROWS_AS(dims_for_size(0), Error);
}

TEST_CASE("u_ext pads with zeros outside 1..N") {
  const Vector u = vec({1, 2, 3});
  CHECK(u_ext(u, 2) == 2.0);
  CHECK(u_ext(u, 0) == 0.0);
  CHECK(u_ext(u, 4) == 0.0);
  CHECK(u_ext(u, -7) == 0.0);
  CHECK(u_ext(u, 100) == 0.0);
}

TEST_CASE("w at the origin is 1 in range and 0 outside") {
  const PhasePoint x = PhasePoint::origin(dims(2));
  for (int i = 1; i <= 3; ++i) CHECK(w(x, i) == 1.0);
  CHECK(w(x, 4) == 0.0);
  CHECK(w(x, 0) == 0.0);
  CHECK(w(x, -1) == 0.0);
}

TEST_CASE("w substitutes q and p with zero boundary q") {
  const PhasePoint x{vec({1, 0, -1}), vec({0, 0, 0})};
  CHECK(w(x, 2) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(w(x, 2) == doctest::Approx(0.367879).epsilon(1e-6));
  // i = 1 uses q_0 = 0, i = 3 uses q_4 = 0.
  CHECK(w(x, 1) == doctest::Approx(1.0));
  CHECK(w(x, 3) == doctest::Approx(1.0));

  const PhasePoint y{vec({0.3, -0.2, 0.7}), vec({0.1, 0.4, -0.5})};
  CHECK(w(y, 1) == doctest::Approx(std::exp(0.1 + 0.5 * (-0.2 - 0.0))));
  CHECK(w(y, 2) == doctest::Approx(std::exp(0.4 + 0.5 * (0.7 - 0.3))));
  CHECK(w(y, 3) == doctest::Approx(std::exp(-0.5 + 0.5 * (0.0 - (-0.2)))));
}

TEST_CASE("w is positive for any finite point") {
  const Dimension d = dims(3);
  for (const PhasePoint& x : sample_phase(SampleSpec{11, 30, {Box{-5.0, 5.0}}}, d))
    for (int i = 1; i <= d.N; ++i) CHECK(w(x, i) > 0.0);
}

TEST_CASE("w_exponent_gradients matches differentiation of log w") {
  const Dimension d = dims(3);
  const Matrix G = w_exponent_gradients(d.N);
  const Vector x = sample_points(SampleSpec{5, 1, {}}, d, Space::kPhase).front();
  for (int k = 1; k <= d.N; ++k) {
    const Vector g = testing::gradient_fd([&](const Vector& y) { return std::log(w(y, k)); }, x);
    CHECK(kmlab::max_abs(Vector(g - G.row(k - 1).transpose())) < 1e-10);
  }
}

TEST_CASE("flat ordering is (q, p)") {
  const PhasePoint x{vec({1, 2, 3}), vec({4, 5, 6})};
  CHECK(x.flat() == vec({1, 2, 3, 4, 5, 6}));
  const PhasePoint back = PhasePoint::from_flat(x.flat());
  CHECK(back.q == x.q);
  CHECK(back.p == x.p);
  CHECK_THROWS_AS(PhasePoint::from_flat(vec({1, 2, 3})), Error);
}

TEST_CASE("sample_points is deterministic and stays in the box") {
  const Dimension d = dims(3);
  const SampleSpec spec{2024, 40, {}};
  const auto a = sample_points(spec, d, Space::kU);
  const auto b = sample_points(spec, d, Space::kU);
  REQUIRE(a.size() == 40);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k] == b[k]);
    CHECK(a[k].size() == d.N);
    CHECK(a[k].minCoeff() >= 0.5);
    CHECK(a[k].maxCoeff() <= 1.5);
  }
  for (const Vector& x : sample_points(spec, d, Space::kPhase)) {
    CHECK(x.size() == d.M);
    CHECK(x.minCoeff() >= -1.0);
    CHECK(x.maxCoeff() <= 1.0);
  }
}

TEST_CASE("sample_points: prefixes are stable and seeds differ") {
  const Dimension d = dims(2);
  const auto small = sample_points(SampleSpec{7, 5, {}}, d, Space::kPhase);
  const auto large = sample_points(SampleSpec{7, 50, {}}, d, Space::kPhase);
  for (std::size_t k = 0; k < small.size(); ++k) CHECK(small[k] == large[k]);
  const auto other = sample_points(SampleSpec{8, 5, {}}, d, Space::kPhase);
  CHECK(other.front() != small.front());
}

TEST_CASE("sample_points honours per-coordinate boxes") {
  const Dimension d = dims(2);
  const std::vector<Box> box = {{0.05, 0.1}, {10.0, 11.0}, {2.0, 3.0}};
  for (const Vector& u : sample_points(SampleSpec{3, 20, box}, d, Space::kU)) {
    CHECK(u[0] >= 0.05);
    CHECK(u[0] <= 0.1);
    CHECK(u[1] >= 10.0);
    CHECK(u[1] <= 11.0);
    CHECK(u[2] >= 2.0);
    CHECK(u[2] <= 3.0);
  }
  for (const Vector& x : sample_points(SampleSpec{3, 20, {Box{-3.0, -2.0}}}, d, Space::kPhase)) {
    CHECK(x.minCoeff() >= -3.0);
    CHECK(x.maxCoeff() <= -2.0);
  }
}

TEST_CASE("sample_points rejects bad specs") {
  const Dimension d = dims(2);
  CHECK_THROWS_AS(sample_points(SampleSpec{1, 0, {}}, d, Space::kU), Error);
  CHECK_THROWS_AS(sample_points(SampleSpec{1, 3, {Box{1.0, 1.0}}}, d, Space::kU), Error);
  CHECK_THROWS_AS(sample_points(SampleSpec{1, 3, {Box{1, 2}, Box{1, 2}}}, d, Space::kU), Error);
  // u-space points must stay strictly positive.
  CHECK_THROWS_AS(sample_points(SampleSpec{1, 3, {Box{-1, 1}}}, d, Space::kU), Error);
}
