#pragma once

// Fixed-step RK4 integration with invariant and spectrum monitoring.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kmlab/core_state.hpp"

namespace kmlab {

using VectorFunction = std::function<Vector(const Vector&)>;

/// One classical RK4 step. Throws kIntegrationFailure on a non-finite result.
Vector rk4_step(const VectorFunction& f, const Vector& x, double dt);

struct MonitorSpec {
  Space space = Space::kU;  // phase-space states are monitored through Psi
  int kmax = 4;
};

struct Trajectory {
  Space space = Space::kU;
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<std::vector<double>> invariant_series;  // H_1..H_kmax per output time
  std::vector<Vector> spectrum_series;                // sorted eigenvalues of L
  long long steps = 0;
  bool failed = false;
  std::string failure;
};

/// Output stride max(1, floor(0.01 / dt)) steps.
long long output_stride(double dt);

/// Fixed-step RK4 from t = 0 to t1. The state update is accumulated with
/// Kahan compensation, and monitored quantities are evaluated in long double,
/// so invariant drift reflects truncation error rather than round-off.
/// A non-finite state stops the run and returns the partial trajectory
/// flagged as failed.
Trajectory integrate(const VectorFunction& f, const Vector& x0, double t1, double dt,
                     const std::optional<MonitorSpec>& monitor = std::nullopt);

struct DriftReport {
  std::vector<double> invariant_drift;  // max |H_k(t) - H_k(0)| / max(1, |H_k(0)|)
  std::vector<double> eigen_drift;      // max |lambda_k(t) - lambda_k(0)|
  double max_invariant_drift = 0.0;
  double max_eigen_drift = 0.0;
  long long steps = 0;
  std::string method;
};

inline constexpr const char* kIntegratorName = "rk4-fixed-step (compensated accumulation)";

DriftReport drift_report(const Trajectory& traj);

/// H_1..H_kmax and the spectrum of L at u, computed in long double.
struct MonitorSample {
  std::vector<double> invariants;
  Vector spectrum;
};

MonitorSample monitor_sample(const Vector& u, int kmax);

/// KM flow on u-space, and the lifted flow J2 grad h1 on phase space.
VectorFunction km_flow();
VectorFunction phase_flow();

}  // namespace kmlab
