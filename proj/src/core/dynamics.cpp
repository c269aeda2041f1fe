#include "kmlab/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "kmlab/error.hpp"
#include "kmlab/hierarchy.hpp"
#include "kmlab/lax.hpp"
#include "kmlab/maps.hpp"
#include "kmlab/poisson.hpp"
#include "kmlab/symmetric_eigen.hpp"

namespace kmlab {

namespace {

Vector rk4_increment(const VectorFunction& f, const Vector& x, double dt) {
  const Vector k1 = f(x);
  const Vector k2 = f(x + 0.5 * dt * k1);
  const Vector k3 = f(x + 0.5 * dt * k2);
  const Vector k4 = f(x + dt * k3);
  return (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

Vector rk4_step(const VectorFunction& f, const Vector& x, double dt) {
  require(dt > 0.0, ErrorCode::kInvalidArgument, "rk4_step needs dt > 0");
  Vector next = x + rk4_increment(f, x, dt);
  if (!next.allFinite()) fail(ErrorCode::kIntegrationFailure, "rk4_step produced a non-finite state");
  return next;
}

long long output_stride(double dt) { return std::max<long long>(1, static_cast<long long>(std::floor(0.01 / dt))); }

MonitorSample monitor_sample(const Vector& u, int kmax) {
  using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const LMatrix L = lax_matrix<long double>(u);
  MonitorSample s;
  LMatrix P = LMatrix::Identity(L.rows(), L.cols());
  for (int k = 1; k <= kmax; ++k) {
    P = P * L;
    s.invariants.push_back(static_cast<double>(P.trace() / k));
  }
  s.spectrum = jacobi_eigenvalues<long double>(L, 1e-18L).values.cast<double>();
  return s;
}

Trajectory integrate(const VectorFunction& f, const Vector& x0, double t1, double dt,
                     const std::optional<MonitorSpec>& monitor) {
  require(t1 > 0.0 && dt > 0.0 && dt <= t1, ErrorCode::kInvalidArgument, "integrate needs 0 < dt <= t1");
  if (monitor) require(monitor->kmax >= 1, ErrorCode::kInvalidArgument, "monitor kmax must be >= 1");

  Trajectory traj;
  if (monitor) traj.space = monitor->space;
  const long long steps = static_cast<long long>(std::llround(t1 / dt));
  const long long stride = output_stride(dt);

  auto record = [&](double t, const Vector& x) {
    traj.times.push_back(t);
    traj.states.push_back(x);
    if (!monitor) return;
    const Vector u = monitor->space == Space::kU ? x : volterra_map(x).u;
    MonitorSample s = monitor_sample(u, monitor->kmax);
    traj.invariant_series.push_back(std::move(s.invariants));
    traj.spectrum_series.push_back(std::move(s.spectrum));
  };

  Vector x = x0;
  Vector compensation = Vector::Zero(x.size());
  try {
    record(0.0, x);
    for (long long step = 1; step <= steps; ++step) {
      const Vector y = rk4_increment(f, x, dt) - compensation;
      const Vector sum = x + y;
      compensation = (sum - x) - y;
      x = sum;
      traj.steps = step;
      if (!x.allFinite()) {
        traj.failed = true;
        traj.failure = "non-finite state at step " + std::to_string(step);
        break;
      }
      if (step % stride == 0 || step == steps) record(static_cast<double>(step) * dt, x);
    }
  } catch (const Error& e) {
    traj.failed = true;
    traj.failure = e.what();
  }
  return traj;
}

DriftReport drift_report(const Trajectory& traj) {
  require(!traj.invariant_series.empty(), ErrorCode::kInvalidArgument, "drift_report needs a monitored trajectory");
  DriftReport r;
  r.steps = traj.steps;
  r.method = kIntegratorName;
  const std::vector<double>& H0 = traj.invariant_series.front();
  const Vector& lambda0 = traj.spectrum_series.front();
  r.invariant_drift.assign(H0.size(), 0.0);
  r.eigen_drift.assign(static_cast<std::size_t>(lambda0.size()), 0.0);
  for (std::size_t t = 0; t < traj.invariant_series.size(); ++t) {
    for (std::size_t k = 0; k < H0.size(); ++k) {
      const double drift = std::abs(traj.invariant_series[t][k] - H0[k]) / std::max(1.0, std::abs(H0[k]));
      r.invariant_drift[k] = std::max(r.invariant_drift[k], drift);
    }
    for (Eigen::Index k = 0; k < lambda0.size(); ++k) {
      const double drift = std::abs(traj.spectrum_series[t][k] - lambda0[k]);
      r.eigen_drift[static_cast<std::size_t>(k)] = std::max(r.eigen_drift[static_cast<std::size_t>(k)], drift);
    }
  }
  for (double v : r.invariant_drift) r.max_invariant_drift = std::max(r.max_invariant_drift, v);
  for (double v : r.eigen_drift) r.max_eigen_drift = std::max(r.max_eigen_drift, v);
  return r;
}

VectorFunction km_flow() {
  return [](const Vector& u) { return km_rhs(UPoint{u}); };
}

VectorFunction phase_flow() {
  return [](const Vector& x) {
    // h1 = sum_i w(i), so grad h1 = G^T w.
    const Eigen::Index N = x.size() / 2;
    const Vector g = w_exponent_gradients(static_cast<int>(N)).transpose() * w_vector(x);
    Vector v(x.size());
    v << g.tail(N), -g.head(N);
    return v;
  };
}

}  // namespace kmlab
