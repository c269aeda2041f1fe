#include "kmlab/core_state.hpp"

#include <cmath>
#include <random>
#include <string>

#include "kmlab/error.hpp"

namespace kmlab {

Dimension dims(int n) {
  if (n < 1) fail(ErrorCode::kInvalidDimension, "lattice parameter n must be >= 1, got " + std::to_string(n));
  Dimension d;
  d.n = n;
  d.N = 2 * n - 1;
  d.M = 2 * d.N;
  d.lax_size = 2 * n;
  return d;
}

Vector PhasePoint::flat() const {
  Vector x(q.size() + p.size());
  x << q, p;
  return x;
}

PhasePoint PhasePoint::from_flat(const Vector& x) {
  require(x.size() % 2 == 0, ErrorCode::kDimensionMismatch, "phase vector must have even length");
  const Eigen::Index N = x.size() / 2;
  return PhasePoint{x.head(N), x.tail(N)};
}

PhasePoint PhasePoint::origin(const Dimension& d) { return PhasePoint{Vector::Zero(d.N), Vector::Zero(d.N)}; }

double u_ext(const Vector& u, int i) {
  if (i < 1 || i > u.size()) return 0.0;
  return u[i - 1];
}

double w(const Vector& x, int i) {
  const int N = static_cast<int>(x.size() / 2);
  if (i < 1 || i > N) return 0.0;
  auto q = [&](int k) { return (k >= 1 && k <= N) ? x[k - 1] : 0.0; };
  return std::exp(x[N + i - 1] + 0.5 * (q(i + 1) - q(i - 1)));
}

double w_log_partial(int N, int k, int c) {
  if (k < 1 || k > N) return 0.0;
  if (c == N + k - 1) return 1.0;      // p_k
  if (k + 1 <= N && c == k) return 0.5;   // q_{k+1} sits at flat index k
  if (k - 1 >= 1 && c == k - 2) return -0.5;  // q_{k-1}
  return 0.0;
}

Vector w_vector(const Vector& x) {
  const int N = static_cast<int>(x.size() / 2);
  Vector v(N);
  for (int k = 1; k <= N; ++k) v[k - 1] = w(x, k);
  return v;
}

Matrix w_exponent_gradients(int N) {
  Matrix G(N, 2 * N);
  for (int k = 1; k <= N; ++k)
    for (int c = 0; c < 2 * N; ++c) G(k - 1, c) = w_log_partial(N, k, c);
  return G;
}

Dimension dims_for_size(int N) {
  if (N < 1 || N % 2 == 0) fail(ErrorCode::kInvalidDimension, "u-space dimension must be odd and positive, got " + std::to_string(N));
  return dims((N + 1) / 2);
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Box default_box(Space space) { return space == Space::kU ? Box{0.5, 1.5} : Box{-1.0, 1.0}; }

std::vector<Vector> sample_points(const SampleSpec& spec, const Dimension& dim, Space space) {
  require(spec.count >= 1, ErrorCode::kInvalidArgument, "sample count must be >= 1");
  const int size = space == Space::kU ? dim.N : dim.M;
  require(spec.box.empty() || spec.box.size() == 1 || static_cast<int>(spec.box.size()) == size,
          ErrorCode::kDimensionMismatch, "sample box must have 1 or dim intervals");
  for (const Box& b : spec.box) require(b.lower < b.upper, ErrorCode::kInvalidArgument, "sample box needs lower < upper");
  if (space == Space::kU) {
    for (const Box& b : spec.box) require(b.lower > 0.0, ErrorCode::kDomain, "u-space sample box must be positive");
  }

  auto box_for = [&](int c) {
    if (spec.box.empty()) return default_box(space);
    return spec.box.size() == 1 ? spec.box[0] : spec.box[static_cast<std::size_t>(c)];
  };

  std::vector<Vector> points;
  points.reserve(static_cast<std::size_t>(spec.count));
  for (int k = 0; k < spec.count; ++k) {
    std::uint64_t state = spec.seed ^ (0xD1B54A32D192ED03ULL * static_cast<std::uint64_t>(k + 1));
    std::mt19937_64 stream(splitmix64(state));
    Vector x(size);
    for (int c = 0; c < size; ++c) {
      const double unit = static_cast<double>(stream() >> 11) * 0x1.0p-53;
      const Box b = box_for(c);
      x[c] = b.lower + (b.upper - b.lower) * unit;
    }
    points.push_back(std::move(x));
  }
  return points;
}

std::vector<UPoint> sample_u(const SampleSpec& spec, const Dimension& dim) {
  std::vector<UPoint> out;
  for (auto& v : sample_points(spec, dim, Space::kU)) out.push_back(UPoint{std::move(v)});
  return out;
}

std::vector<PhasePoint> sample_phase(const SampleSpec& spec, const Dimension& dim) {
  std::vector<PhasePoint> out;
  for (auto& v : sample_points(spec, dim, Space::kPhase)) out.push_back(PhasePoint::from_flat(v));
  return out;
}

}  // namespace kmlab
