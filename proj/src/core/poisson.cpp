#include "kmlab/poisson.hpp"

#include <algorithm>
#include <random>
#include <tuple>

#include "kmlab/error.hpp"
#include "kmlab/maps.hpp"
#include "kmlab/symmetries.hpp"

namespace kmlab {

Matrix pi2(const UPoint& u) {
  const int N = u.size();
  Matrix P = Matrix::Zero(N, N);
  for (int i = 0; i + 1 < N; ++i) {
    P(i, i + 1) = u.u[i] * u.u[i + 1];
    P(i + 1, i) = -P(i, i + 1);
  }
  return P;
}

Partials pi2_partials(const UPoint& u) {
  const int N = u.size();
  Partials D(static_cast<std::size_t>(N), Matrix::Zero(N, N));
  auto put = [&](int c, int a, int b, double v) {
    D[static_cast<std::size_t>(c)](a, b) += v;
    D[static_cast<std::size_t>(c)](b, a) -= v;
  };
  for (int i = 0; i + 1 < N; ++i) {
    put(i, i, i + 1, u.u[i + 1]);
    put(i + 1, i, i + 1, u.u[i]);
  }
  return D;
}

Matrix pi3(const UPoint& u) {
  const int N = u.size();
  const Vector& v = u.u;
  Matrix P = Matrix::Zero(N, N);
  for (int i = 0; i + 1 < N; ++i) {
    P(i, i + 1) = v[i] * v[i + 1] * (v[i] + v[i + 1]);
    P(i + 1, i) = -P(i, i + 1);
  }
  for (int i = 0; i + 2 < N; ++i) {
    P(i, i + 2) = v[i] * v[i + 1] * v[i + 2];
    P(i + 2, i) = -P(i, i + 2);
  }
  return P;
}

Partials pi3_partials(const UPoint& u) {
  const int N = u.size();
  const Vector& v = u.u;
  Partials D(static_cast<std::size_t>(N), Matrix::Zero(N, N));
  auto put = [&](int c, int a, int b, double val) {
    D[static_cast<std::size_t>(c)](a, b) += val;
    D[static_cast<std::size_t>(c)](b, a) -= val;
  };
  for (int i = 0; i + 1 < N; ++i) {
    put(i, i, i + 1, 2 * v[i] * v[i + 1] + v[i + 1] * v[i + 1]);
    put(i + 1, i, i + 1, v[i] * v[i] + 2 * v[i] * v[i + 1]);
  }
  for (int i = 0; i + 2 < N; ++i) {
    put(i, i, i + 2, v[i + 1] * v[i + 2]);
    put(i + 1, i, i + 2, v[i] * v[i + 2]);
    put(i + 2, i, i + 2, v[i] * v[i + 1]);
  }
  return D;
}

BivectorField pi2_field(const Dimension& d) {
  return BivectorField{d.N, [](const Vector& u) { return pi2(UPoint{u}); },
                       [](const Vector& u) { return pi2_partials(UPoint{u}); }, "pi2"};
}

BivectorField pi3_field(const Dimension& d) {
  return BivectorField{d.N, [](const Vector& u) { return pi3(UPoint{u}); },
                       [](const Vector& u) { return pi3_partials(UPoint{u}); }, "pi3"};
}

Matrix j2(const Dimension& d) {
  Matrix J = Matrix::Zero(d.M, d.M);
  J.topRightCorner(d.N, d.N) = Matrix::Identity(d.N, d.N);
  J.bottomLeftCorner(d.N, d.N) = -Matrix::Identity(d.N, d.N);
  return J;
}

BivectorField j2_field(const Dimension& d) {
  const Matrix J = j2(d);
  const int M = d.M;
  return BivectorField{M, [J](const Vector&) { return J; },
                       [M](const Vector&) { return Partials(static_cast<std::size_t>(M), Matrix::Zero(M, M)); },
                       "J2"};
}

namespace {

// One term coef * w(k) contributing to bracket {x_a, x_b}.
struct ExpTerm {
  int a;
  int b;
  int k;
  double coef;
};

// The explicit bracket list, each rule applied to exactly its stated range.
std::vector<ExpTerm> j3_closed_terms(int N) {
  std::vector<ExpTerm> t;
  auto q = [](int i) { return i - 1; };
  auto p = [N](int i) { return N + i - 1; };
  auto add = [&](int a, int b, int k, double c) {
    if (k >= 1 && k <= N) t.push_back({a, b, k, c});
  };

  for (int i = 1; i <= N; ++i)
    for (int j = i + 1; j <= N; ++j) add(q(i), q(j), j, 1.0);

  add(q(1), p(1), 1, 1.0);
  add(q(1), p(1), 2, 0.5);
  for (int i = 2; i <= N; ++i) {
    add(q(i), p(i), i, 0.5);
    add(q(i), p(i), i + 1, 0.5);
  }
  for (int i = 1; i <= N - 1; ++i) add(q(i), p(i + 1), i + 2, 0.5);
  if (N >= 2) add(q(2), p(1), 2, 1.0);
  for (int i = 3; i <= N; ++i) add(q(i), p(i - 1), i, 0.5);
  for (int i = 1; i <= N; ++i) {
    for (int j = i + 2; j <= N; ++j) {
      add(q(i), p(j), j - 1, -0.5);
      add(q(i), p(j), j + 1, 0.5);
    }
  }
  for (int i = 3; i <= N; ++i) add(q(i), p(1), i, 0.5);

  if (N >= 2) {
    add(p(1), p(2), 1, 0.5);
    add(p(1), p(2), 2, 0.25);
    add(p(1), p(2), 3, -0.25);
  }
  for (int i = 2; i <= N - 1; ++i) {
    add(p(i), p(i + 1), i, 0.25);
    add(p(i), p(i + 1), i + 1, 0.25);
  }
  if (N >= 3) {
    add(p(1), p(3), 2, 0.5);
    add(p(1), p(3), 4, -0.25);
  }
  for (int i = 2; i <= N - 2; ++i) add(p(i), p(i + 2), i + 1, 0.25);
  for (int j = 4; j <= N; ++j) {
    add(p(1), p(j), j + 1, -0.25);
    add(p(1), p(j), j - 1, 0.25);
  }
  return t;
}

}  // namespace

Matrix j3_closed(const PhasePoint& x) {
  const int N = x.size();
  const Vector flat = x.flat();
  const Vector wv = w_vector(flat);
  Matrix J = Matrix::Zero(2 * N, 2 * N);
  for (const ExpTerm& t : j3_closed_terms(N)) {
    const double v = t.coef * wv[t.k - 1];
    J(t.a, t.b) += v;
    J(t.b, t.a) -= v;
  }
  return J;
}

Partials j3_closed_partials(const PhasePoint& x) {
  const int N = x.size();
  const int M = 2 * N;
  const Vector flat = x.flat();
  const Vector wv = w_vector(flat);
  const Matrix G = w_exponent_gradients(N);
  Partials D(static_cast<std::size_t>(M), Matrix::Zero(M, M));
  for (const ExpTerm& t : j3_closed_terms(N)) {
    for (int c = 0; c < M; ++c) {
      const double v = t.coef * G(t.k - 1, c) * wv[t.k - 1];
      if (v == 0.0) continue;
      D[static_cast<std::size_t>(c)](t.a, t.b) += v;
      D[static_cast<std::size_t>(c)](t.b, t.a) -= v;
    }
  }
  return D;
}

BivectorField j3_closed_field(const Dimension& d) {
  return BivectorField{d.M, [](const Vector& x) { return j3_closed(PhasePoint::from_flat(x)); },
                       [](const Vector& x) { return j3_closed_partials(PhasePoint::from_flat(x)); }, "J3 closed"};
}

Matrix j3_oracle(const PhasePoint& x) {
  const Matrix D = x1_jacobian(x);
  const Matrix J = j2(dims_for_size(x.size()));
  return D * J + J * D.transpose();
}

Partials j3_oracle_partials(const PhasePoint& x) {
  const int N = x.size();
  const int M = 2 * N;
  const Dimension d = dims_for_size(N);
  const Matrix coef = x1_coefficients(d);
  const Matrix G = w_exponent_gradients(N);
  const Vector wv = w_vector(x.flat());
  const Matrix J = j2(d);
  Partials out;
  out.reserve(static_cast<std::size_t>(M));
  for (int c = 0; c < M; ++c) {
    // d/dx_c of DX1 = coef * diag(w o G(:, c)) * G.
    const Vector weights = wv.cwiseProduct(G.col(c));
    const Matrix dD = coef * weights.asDiagonal() * G;
    out.push_back(dD * J + J * dD.transpose());
  }
  return out;
}

BivectorField j3_field(const Dimension& d) {
  return BivectorField{d.M, [](const Vector& x) { return j3_oracle(PhasePoint::from_flat(x)); },
                       [](const Vector& x) { return j3_oracle_partials(PhasePoint::from_flat(x)); }, "J3"};
}

Vector ham_vf(const BivectorField& pi, const std::function<Vector(const Vector&)>& grad, const Vector& x) {
  require(x.size() == pi.dim, ErrorCode::kDimensionMismatch, "ham_vf: point dimension does not match tensor");
  const Vector g = grad(x);
  require(g.size() == pi.dim, ErrorCode::kDimensionMismatch, "ham_vf: gradient dimension does not match tensor");
  return pi.eval(x) * g;
}

double bracket(const ScalarField& f, const ScalarField& g, const BivectorField& pi, const Vector& x,
               DerivativeSource source) {
  require(f.dim == pi.dim && g.dim == pi.dim, ErrorCode::kDimensionMismatch, "bracket: dimension mismatch");
  return gradient_of(f, x, source).dot(pi.eval(x) * gradient_of(g, x, source));
}

namespace {

std::vector<std::tuple<int, int, int>> jacobi_triples(int dim, const JacobiOptions& options) {
  std::vector<std::tuple<int, int, int>> triples;
  const long long total = static_cast<long long>(dim) * (dim - 1) * (dim - 2) / 6;
  if (dim <= options.full_dim_limit || total <= options.max_triples) {
    for (int a = 0; a < dim; ++a)
      for (int b = a + 1; b < dim; ++b)
        for (int c = b + 1; c < dim; ++c) triples.emplace_back(a, b, c);
    return triples;
  }
  std::mt19937_64 rng(options.seed);
  while (static_cast<int>(triples.size()) < options.max_triples) {
    int idx[3];
    for (int& v : idx) v = static_cast<int>(rng() % static_cast<std::uint64_t>(dim));
    std::sort(idx, idx + 3);
    if (idx[0] == idx[1] || idx[1] == idx[2]) continue;
    triples.emplace_back(idx[0], idx[1], idx[2]);
  }
  return triples;
}

}  // namespace

double jacobi_residual(const BivectorField& pi, const Vector& x, const JacobiOptions& options) {
  require(x.size() == pi.dim, ErrorCode::kDimensionMismatch, "jacobi_residual: point dimension mismatch");
  const Matrix P = pi.eval(x);
  const Partials D = partials_of(pi, x, options.source);
  const int dim = pi.dim;
  double worst = 0.0;
  for (const auto& [a, b, c] : jacobi_triples(dim, options)) {
    double s = 0.0;
    for (int d = 0; d < dim; ++d) {
      const Matrix& Dd = D[static_cast<std::size_t>(d)];
      s += P(a, d) * Dd(b, c) + P(b, d) * Dd(c, a) + P(c, d) * Dd(a, b);
    }
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

double compatibility_residual(const BivectorField& a, const BivectorField& b, const Vector& x,
                              const JacobiOptions& options) {
  return jacobi_residual(sum(a, b), x, options);
}

double pushforward_residual(const PhasePoint& x, const BivectorField& J, const BivectorField& target) {
  require(J.dim == 2 * x.size() && target.dim == x.size(), ErrorCode::kDimensionMismatch,
          "pushforward_residual: tensor dimensions do not match the point");
  const Vector flat = x.flat();
  const Matrix D = volterra_jacobian(flat);
  const Matrix pushed = D * J.eval(flat) * D.transpose();
  return max_abs(Matrix(pushed - target.eval(volterra_map(flat).u)));
}

Matrix lie_derivative_bivector(const VectorFieldHandle& X, const BivectorField& pi, const Vector& x,
                               DerivativeSource source) {
  require(X.dim == pi.dim && x.size() == pi.dim, ErrorCode::kDimensionMismatch,
          "lie_derivative_bivector: dimension mismatch");
  const Vector v = X.eval(x);
  const Matrix DX = jacobian_of(X, x, source);
  const Matrix P = pi.eval(x);
  const Partials D = partials_of(pi, x, source);
  Matrix out = -(DX * P) - P * DX.transpose();
  for (int c = 0; c < pi.dim; ++c) out += v[c] * D[static_cast<std::size_t>(c)];
  return out;
}

std::string coordinate_name(int N, int flat_index) {
  return flat_index < N ? "q" + std::to_string(flat_index + 1) : "p" + std::to_string(flat_index - N + 1);
}

std::vector<J3Discrepancy> j3_discrepancies(const std::vector<PhasePoint>& points, double tol) {
  require(!points.empty(), ErrorCode::kInvalidArgument, "j3_discrepancies needs at least one point");
  const int N = points.front().size();
  const int M = 2 * N;
  Matrix worst = Matrix::Zero(M, M);
  for (const PhasePoint& x : points) worst = worst.cwiseMax((j3_oracle(x) - j3_closed(x)).cwiseAbs());
  std::vector<J3Discrepancy> out;
  for (int a = 0; a < M; ++a)
    for (int b = a + 1; b < M; ++b)
      if (worst(a, b) > tol) out.push_back({coordinate_name(N, a), coordinate_name(N, b), worst(a, b)});
  return out;
}

}  // namespace kmlab
