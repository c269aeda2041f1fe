#include <doctest.h>

#include <cmath>

#include "kmlab/dynamics.hpp"
#include "kmlab/error.hpp"
#include "kmlab/lax.hpp"
#include "kmlab/maps.hpp"
#include "support.hpp"

using namespace kmlab;
using testing::vec;

namespace {

Trajectory km_run(const Vector& u0, double t1, double dt, int kmax = 4) {
  return integrate(km_flow(), u0, t1, dt, MonitorSpec{Space::kU, kmax});
}

Vector seeded_u0() { return sample_points(SampleSpec{7, 1, {Box{0.5, 1.5}}}, dims(3), Space::kU).front(); }

}  // namespace

TEST_CASE("rk4_step on trivial fields") {
  const Vector x = vec({1.5, -2, 0.25});
  CHECK(rk4_step([](const Vector& v) { return Vector(Vector::Zero(v.size())); }, x, 0.1) == x);
  const Vector c = vec({0.5, -1, 2});
  const Vector y = rk4_step([&](const Vector&) { return c; }, x, 0.25);
  CHECK(max_abs(Vector(y - (x + 0.25 * c))) < 1e-15);
}

TEST_CASE("rk4_step on x' = x reproduces the degree-4 Taylor polynomial") {
  const double h = 0.1;
  const Vector y = rk4_step([](const Vector& v) { return v; }, vec({1}), h);
  const double taylor = 1 + h + h * h / 2 + h * h * h / 6 + h * h * h * h / 24;
  CHECK(y[0] == doctest::Approx(taylor).epsilon(1e-15));
  CHECK(y[0] == doctest::Approx(1.10517083333333).epsilon(1e-13));
}

TEST_CASE("rk4_step reports non-finite results") {
  const VectorFunction sq = [](const Vector& v) { return Vector(v.cwiseProduct(v)); };
  CHECK_THROWS_AS(rk4_step(sq, vec({1e200}), 1.0), Error);
  try {
    rk4_step(sq, vec({1e200}), 1.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIntegrationFailure);
  }
  CHECK_THROWS_AS(rk4_step(sq, vec({1}), 0.0), Error);
}

TEST_CASE("integrate preconditions") {
  const VectorFunction f = km_flow();
  CHECK_THROWS_AS(integrate(f, vec({1, 1, 1}), 0.0, 1e-3), Error);
  CHECK_THROWS_AS(integrate(f, vec({1, 1, 1}), 1.0, 0.0), Error);
  CHECK_THROWS_AS(integrate(f, vec({1, 1, 1}), 1e-3, 1e-2), Error);
}

TEST_CASE("output stride") {
  CHECK(output_stride(1e-3) == 10);
  CHECK(output_stride(2e-3) == 5);
  CHECK(output_stride(0.05) == 1);
}

TEST_CASE("KM flow from (1,1,1): positivity and conservation of the sum") {
  const Trajectory tr = km_run(vec({1, 1, 1}), 10.0, 1e-3);
  REQUIRE_FALSE(tr.failed);
  CHECK(tr.steps == 10000);
  CHECK(tr.times.front() == 0.0);
  CHECK(tr.times.back() == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(tr.states.size() == tr.times.size());
  CHECK(tr.invariant_series.size() == tr.times.size());
  CHECK(tr.spectrum_series.size() == tr.times.size());
  double drift = 0.0;
  for (std::size_t r = 0; r < tr.times.size(); ++r) {
    if (r > 0) CHECK(tr.times[r] > tr.times[r - 1]);
    CHECK(tr.states[r].minCoeff() > 0.0);
    drift = std::max(drift, std::abs(tr.states[r].sum() - 3.0));
  }
  CHECK(drift < 1e-10);
}

TEST_CASE("lifted flow pushed through the Volterra map follows the KM trajectory") {
  const Dimension d = dims(2);
  const Trajectory u = integrate(km_flow(), vec({1, 1, 1}), 10.0, 1e-3);
  const Trajectory x = integrate(phase_flow(), PhasePoint::origin(d).flat(), 10.0, 1e-3);
  REQUIRE(u.states.size() == x.states.size());
  double worst = 0.0;
  for (std::size_t r = 0; r < u.states.size(); ++r)
    worst = std::max(worst, max_abs(Vector(volterra_map(PhasePoint::from_flat(x.states[r])).u - u.states[r])));
  CHECK(worst < 1e-8);
}

TEST_CASE("phase-space monitoring goes through the Volterra map") {
  const Dimension d = dims(2);
  const Trajectory x = integrate(phase_flow(), PhasePoint::origin(d).flat(), 1.0, 1e-3, MonitorSpec{Space::kPhase, 3});
  REQUIRE(x.invariant_series.size() == x.times.size());
  CHECK(x.invariant_series.front()[0] == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(x.invariant_series.front()[1] == doctest::Approx(7.0).epsilon(1e-15));
  CHECK(drift_report(x).max_invariant_drift < 1e-10);
}

TEST_CASE("isospectrality at n = 3") {
  const DriftReport r = drift_report(km_run(seeded_u0(), 10.0, 1e-3));
  CHECK(r.steps == 10000);
  CHECK(r.method == kIntegratorName);
  REQUIRE(r.invariant_drift.size() == 4);
  REQUIRE(r.eigen_drift.size() == 6);
  for (double v : r.invariant_drift) CHECK(v >= 0.0);
  CHECK(r.max_eigen_drift < 1e-9);
  CHECK(r.max_invariant_drift < 1e-9);
}

TEST_CASE("invariant drift shrinks at fourth order") {
  const Vector u0 = seeded_u0();
  const double d1 = drift_report(km_run(u0, 10.0, 2e-3)).max_invariant_drift;
  const double d2 = drift_report(km_run(u0, 10.0, 1e-3)).max_invariant_drift;
  const double d3 = drift_report(km_run(u0, 10.0, 5e-4)).max_invariant_drift;
  MESSAGE("drift ratios " << d1 / d2 << " " << d2 / d3);
  CHECK(d1 / d2 > 8.0);
  CHECK(d1 / d2 < 32.0);
  CHECK(d2 / d3 > 8.0);
  CHECK(d2 / d3 < 32.0);
}

TEST_CASE("equilibrium has zero drift") {
  const Trajectory tr = km_run(vec({2.5}), 1.0, 1e-2);
  const DriftReport r = drift_report(tr);
  CHECK(r.max_invariant_drift == 0.0);
  CHECK(r.max_eigen_drift == 0.0);
  for (const Vector& s : tr.states) CHECK(s == vec({2.5}));
}

TEST_CASE("blow-up returns a partial trajectory flagged as failed") {
  // x' = x^2 from x = 1 leaves every finite range at t = 1.
  const Trajectory tr = integrate([](const Vector& v) { return Vector(v.cwiseProduct(v)); }, vec({1}), 2.0, 1e-3);
  CHECK(tr.failed);
  CHECK_FALSE(tr.failure.empty());
  REQUIRE_FALSE(tr.times.empty());
  CHECK(tr.times.back() < 1.1);
  for (const Vector& s : tr.states) CHECK(std::isfinite(s[0]));
}

TEST_CASE("monitor sample matches double-precision invariants and spectrum") {
  const Vector u = seeded_u0();
  const MonitorSample m = monitor_sample(u, 4);
  const std::vector<double> H = invariants(UPoint{u}, 4);
  for (int k = 0; k < 4; ++k) CHECK(m.invariants[k] == doctest::Approx(H[k]).epsilon(1e-13));
  CHECK(max_abs(Vector(m.spectrum - spectrum(UPoint{u}))) < 1e-13);
}
