#pragma once

// Dimension bookkeeping, boundary conventions and seeded sampling for the
// KM (Volterra) lattice with an odd number N = 2n-1 of sites.
//
// Indices in the lattice formulas are 1-based; everything stored in vectors
// is 0-based. u_ext() and w() are the only places that translate, and both
// return exactly 0 outside 1..N.

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace kmlab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct Dimension {
  int n = 1;         // lattice parameter
  int N = 1;         // u-space dimension, 2n-1
  int M = 2;         // phase-space dimension, 2N
  int lax_size = 2;  // 2n

  bool operator==(const Dimension&) const = default;
};

Dimension dims(int n);

/// Lattice state u in R^N.
struct UPoint {
  Vector u;

  int size() const { return static_cast<int>(u.size()); }
};

/// Phase-space state with flat ordering (q_1..q_N, p_1..p_N).
struct PhasePoint {
  Vector q;
  Vector p;

  int size() const { return static_cast<int>(q.size()); }
  Vector flat() const;
  static PhasePoint from_flat(const Vector& x);
  static PhasePoint origin(const Dimension& d);
};

/// u_i for 1 <= i <= N, 0 otherwise (u_0 = u_{2n} = 0).
double u_ext(const Vector& u, int i);
inline double u_ext(const UPoint& u, int i) { return u_ext(u.u, i); }

/// exp(p_i + (q_{i+1} - q_{i-1})/2) with q_0 = q_{2n} = 0, for 1 <= i <= N;
/// 0 for any other i. `x` is the flat (q, p) vector.
double w(const Vector& x, int i);
inline double w(const PhasePoint& x, int i) { return w(x.flat(), i); }

/// d w(x, k) / d x_c divided by w(x, k): the constant gradient of the
/// exponent. Entry c in the flat ordering.
double w_log_partial(int N, int k, int c);

/// (w(x, 1), ..., w(x, N)).
Vector w_vector(const Vector& x);

/// N x M matrix G with G(k-1, c) = w_log_partial(N, k, c), so that
/// d w(x, k) / d x_c = G(k-1, c) w(x, k).
Matrix w_exponent_gradients(int N);

/// Dimension for a u-space of size N (must be odd).
Dimension dims_for_size(int N);

enum class Space { kU, kPhase };

struct Box {
  double lower = -1.0;
  double upper = 1.0;
};

struct SampleSpec {
  std::uint64_t seed = 0;
  int count = 1;
  // Empty means the default box for the space: [0.5, 1.5] for u-space,
  // [-1, 1] for phase space.
  std::vector<Box> box;
};

inline constexpr const char* kPrngName = "mt19937_64+splitmix64-stream";

Box default_box(Space space);

/// Deterministic list of flat points. Point k is drawn from its own
/// mt19937_64 stream seeded with splitmix64(seed, k), so prefixes of a larger
/// sample agree with smaller samples.
std::vector<Vector> sample_points(const SampleSpec& spec, const Dimension& dim, Space space);

std::vector<UPoint> sample_u(const SampleSpec& spec, const Dimension& dim);
std::vector<PhasePoint> sample_phase(const SampleSpec& spec, const Dimension& dim);

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace kmlab
