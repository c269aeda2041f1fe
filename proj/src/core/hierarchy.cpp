#include "kmlab/hierarchy.hpp"

#include <algorithm>
#include <cmath>

#include "kmlab/error.hpp"
#include "kmlab/lax.hpp"
#include "kmlab/maps.hpp"
#include "kmlab/poisson.hpp"
#include "kmlab/symmetries.hpp"

namespace kmlab {

namespace {

Matrix j2_for(const Vector& x) { return j2(dims_for_size(static_cast<int>(x.size() / 2))); }

}  // namespace

Matrix recursion(const PhasePoint& x) {
  return j3_oracle(x) * (-j2(dims_for_size(x.size())));
}

Partials recursion_partials(const PhasePoint& x) {
  const Matrix minus_j2 = -j2(dims_for_size(x.size()));
  Partials D = j3_oracle_partials(x);
  for (Matrix& m : D) m = m * minus_j2;
  return D;
}

MatrixWithPartials recursion_power(const Vector& x, int m, bool with_partials) {
  require(m >= 0, ErrorCode::kInvalidArgument, "recursion power must be >= 0");
  const int M = static_cast<int>(x.size());
  const PhasePoint p = PhasePoint::from_flat(x);
  MatrixWithPartials out{Matrix::Identity(M, M), {}};
  if (with_partials) out.partials.assign(static_cast<std::size_t>(M), Matrix::Zero(M, M));
  if (m == 0) return out;

  const Matrix R = recursion(p);
  const Partials dR = with_partials ? recursion_partials(p) : Partials{};
  for (int step = 0; step < m; ++step) {
    if (with_partials) {
      for (int c = 0; c < M; ++c) {
        Matrix& dP = out.partials[static_cast<std::size_t>(c)];
        dP = dR[static_cast<std::size_t>(c)] * out.value + R * dP;
      }
    }
    out.value = R * out.value;
  }
  return out;
}

Matrix tensor_j(int k, const PhasePoint& x) {
  if (k < 2) fail(ErrorCode::kInvalidArgument, "tensor_j needs k >= 2: there is no negative recursion operator");
  const Vector flat = x.flat();
  return recursion_power(flat, k - 2, false).value * j2_for(flat);
}

BivectorField tensor_field(const Dimension& d, int k) {
  if (k < 2) fail(ErrorCode::kInvalidArgument, "tensor_field needs k >= 2: there is no negative recursion operator");
  if (k == 2) return j2_field(d);
  BivectorField f;
  f.dim = d.M;
  f.label = "J" + std::to_string(k);
  f.eval = [k](const Vector& x) { return tensor_j(k, PhasePoint::from_flat(x)); };
  f.partials = [k](const Vector& x) {
    const Matrix J = j2_for(x);
    Partials D = recursion_power(x, k - 2, true).partials;
    for (Matrix& m : D) m = m * J;
    return D;
  };
  return f;
}

double h_k(int k, const PhasePoint& x) {
  require(k >= 1, ErrorCode::kInvalidArgument, "h_k needs k >= 1");
  return 0.5 * invariants(volterra_map(x), k).back();
}

Vector h_gradient(int k, const Vector& x) {
  require(k >= 1, ErrorCode::kInvalidArgument, "h_gradient needs k >= 1");
  const UPoint u = volterra_map(x);
  return 0.5 * volterra_jacobian(x).transpose() * invariant_gradient(u, k);
}

Matrix h1_hessian(const Vector& x) {
  const int N = static_cast<int>(x.size() / 2);
  const Matrix G = w_exponent_gradients(N);
  return G.transpose() * w_vector(x).asDiagonal() * G;
}

ScalarField h_field(const Dimension& d, int k) {
  require(k >= 1, ErrorCode::kInvalidArgument, "h_field needs k >= 1");
  return ScalarField{d.M, [k](const Vector& x) { return h_k(k, PhasePoint::from_flat(x)); },
                     [k](const Vector& x) { return h_gradient(k, x); }, "h" + std::to_string(k)};
}

Vector flow(int k, const PhasePoint& x) {
  require(k >= 1, ErrorCode::kInvalidArgument, "flow needs k >= 1");
  const Vector flat = x.flat();
  return recursion_power(flat, k - 1, false).value * (j2_for(flat) * h_gradient(1, flat));
}

VectorFieldHandle flow_field(const Dimension& d, int k) {
  require(k >= 1, ErrorCode::kInvalidArgument, "flow_field needs k >= 1");
  VectorFieldHandle f;
  f.dim = d.M;
  f.label = "flow" + std::to_string(k);
  f.eval = [k](const Vector& x) { return flow(k, PhasePoint::from_flat(x)); };
  f.jacobian = [k](const Vector& x) {
    const Matrix J = j2_for(x);
    const Vector base = J * h_gradient(1, x);
    const MatrixWithPartials P = recursion_power(x, k - 1, true);
    Matrix out = P.value * J * h1_hessian(x);
    for (Eigen::Index c = 0; c < x.size(); ++c) out.col(c) += P.partials[static_cast<std::size_t>(c)] * base;
    return out;
  };
  return f;
}

Vector master_x(int k, const PhasePoint& x) {
  require(k >= 0, ErrorCode::kInvalidArgument, "master_x needs k >= 0");
  return recursion_power(x.flat(), k, false).value * x0(x);
}

VectorFieldHandle master_field(const Dimension& d, int k) {
  require(k >= 0, ErrorCode::kInvalidArgument, "master_field needs k >= 0");
  if (k == 0) return x0_field(d);
  VectorFieldHandle f;
  f.dim = d.M;
  f.label = "R^" + std::to_string(k) + " X0";
  f.eval = [k](const Vector& x) { return master_x(k, PhasePoint::from_flat(x)); };
  f.jacobian = [k](const Vector& x) {
    const Vector base = x0(PhasePoint::from_flat(x));
    const MatrixWithPartials P = recursion_power(x, k, true);
    Matrix out(x.size(), x.size());
    for (Eigen::Index c = 0; c < x.size(); ++c) out.col(c) = P.partials[static_cast<std::size_t>(c)] * base;
    return out;
  };
  return f;
}

double lenard_residual_u(int i, const UPoint& u) {
  require(i >= 1, ErrorCode::kInvalidArgument, "lenard_residual_u needs i >= 1");
  const Vector lhs = pi3(u) * invariant_gradient(u, i);
  const Vector rhs = pi2(u) * invariant_gradient(u, i + 1);
  return max_abs(Vector(lhs - rhs)) / std::max(1.0, max_abs(rhs));
}

double lenard_residual_phase(int i, const PhasePoint& x) {
  require(i >= 1, ErrorCode::kInvalidArgument, "lenard_residual_phase needs i >= 1");
  const Vector flat = x.flat();
  const Matrix J = j2_for(flat);
  const Vector lhs = recursion(x) * (J * h_gradient(i, flat));
  const Vector rhs = J * h_gradient(i + 1, flat);
  return max_abs(Vector(lhs - rhs));
}

std::string to_string(RelationKind kind) {
  switch (kind) {
    case RelationKind::kTensor: return "tensor";
    case RelationKind::kHamiltonian: return "hamiltonian";
    case RelationKind::kCommutator: return "commutator";
  }
  return "unknown";
}

bool CoefficientFit::sign_agrees() const {
  if (predicted == 0.0) return std::abs(measured) < 1e-6;
  return (measured > 0) == (predicted > 0);
}

CoefficientFit fit_coefficient(const std::vector<Vector>& lhs, const std::vector<Vector>& target) {
  require(lhs.size() == target.size() && !lhs.empty(), ErrorCode::kInvalidArgument,
          "fit_coefficient needs matching, non-empty samples");
  CoefficientFit fit;
  fit.points = static_cast<int>(lhs.size());
  double num = 0.0;
  double den = 0.0;
  for (std::size_t p = 0; p < lhs.size(); ++p) {
    num += lhs[p].dot(target[p]);
    den += target[p].squaredNorm();
  }
  if (den == 0.0) {
    fit.target_zero = true;
    for (const Vector& a : lhs) fit.relative_residual = std::max(fit.relative_residual, max_abs(a));
    return fit;
  }
  fit.measured = num / den;
  for (std::size_t p = 0; p < lhs.size(); ++p) {
    const double scale = max_abs(target[p]);
    if (scale == 0.0) continue;
    fit.relative_residual = std::max(fit.relative_residual, max_abs(Vector(lhs[p] - fit.measured * target[p])) / scale);
    for (Eigen::Index e = 0; e < target[p].size(); ++e) {
      if (std::abs(target[p][e]) < 1e-3 * scale) continue;
      fit.scalarity_spread = std::max(fit.scalarity_spread, std::abs(lhs[p][e] / target[p][e] - fit.measured));
    }
  }
  return fit;
}

namespace {

Vector flatten(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

}  // namespace

CoefficientFit deformation_coeff_with(const VectorFieldHandle& X, int i, int j, const std::vector<PhasePoint>& points,
                                      DerivativeSource source) {
  require(j >= 2, ErrorCode::kInvalidArgument, "deformation_coeff needs j >= 2");
  require(!points.empty(), ErrorCode::kInvalidArgument, "deformation_coeff needs points");
  const Dimension d = dims_for_size(points.front().size());
  const BivectorField Jj = tensor_field(d, j);
  std::vector<Vector> lhs, target;
  for (const PhasePoint& p : points) {
    const Vector x = p.flat();
    lhs.push_back(flatten(lie_derivative_bivector(X, Jj, x, source)));
    target.push_back(flatten(tensor_j(i + j, p)));
  }
  CoefficientFit fit = fit_coefficient(lhs, target);
  fit.kind = RelationKind::kTensor;
  fit.i = i;
  fit.j = j;
  fit.predicted = j - i - 2;
  return fit;
}

CoefficientFit deformation_coeff(int i, int j, const std::vector<PhasePoint>& points, DerivativeSource source) {
  require(i >= 0, ErrorCode::kInvalidArgument, "deformation_coeff needs i >= 0");
  require(!points.empty(), ErrorCode::kInvalidArgument, "deformation_coeff needs points");
  return deformation_coeff_with(master_field(dims_for_size(points.front().size()), i), i, j, points, source);
}

CoefficientFit ham_deformation_check(int i, int j, const std::vector<PhasePoint>& points, DerivativeSource source) {
  require(i >= 0 && j >= 1, ErrorCode::kInvalidArgument, "ham_deformation_check needs i >= 0, j >= 1");
  require(!points.empty(), ErrorCode::kInvalidArgument, "ham_deformation_check needs points");
  const Dimension d = dims_for_size(points.front().size());
  const VectorFieldHandle X = master_field(d, i);
  const ScalarField h = h_field(d, j);
  std::vector<Vector> lhs, target;
  for (const PhasePoint& p : points) {
    lhs.push_back(Vector::Constant(1, vf_apply_scalar(X, h, p.flat(), source)));
    target.push_back(Vector::Constant(1, h_k(i + j, p)));
  }
  CoefficientFit fit = fit_coefficient(lhs, target);
  fit.kind = RelationKind::kHamiltonian;
  fit.i = i;
  fit.j = j;
  fit.predicted = i + j;
  return fit;
}

CoefficientFit master_commutator_check(int i, int j, const std::vector<PhasePoint>& points, DerivativeSource source) {
  require(i >= 0 && j >= 0, ErrorCode::kInvalidArgument, "master_commutator_check needs i, j >= 0");
  require(!points.empty(), ErrorCode::kInvalidArgument, "master_commutator_check needs points");
  const Dimension d = dims_for_size(points.front().size());
  const VectorFieldHandle Xi = master_field(d, i);
  const VectorFieldHandle Xj = master_field(d, j);
  std::vector<Vector> lhs, target;
  for (const PhasePoint& p : points) {
    const Vector x = p.flat();
    lhs.push_back(i == j ? Vector(Vector::Zero(d.M)) : vf_lie_bracket(Xi, Xj, x, source));
    target.push_back(master_x(i + j, p));
  }
  CoefficientFit fit = fit_coefficient(lhs, target);
  fit.kind = RelationKind::kCommutator;
  fit.i = i;
  fit.j = j;
  fit.predicted = j - i;
  return fit;
}

double flow_commutator_residual(int i, int j, const PhasePoint& x, DerivativeSource source) {
  require(i >= 1 && j >= 1, ErrorCode::kInvalidArgument, "flow_commutator_residual needs i, j >= 1");
  if (i == j) return 0.0;
  const Dimension d = dims_for_size(x.size());
  const VectorFieldHandle Fi = flow_field(d, i);
  const VectorFieldHandle Fj = flow_field(d, j);
  const Vector flat = x.flat();
  const double scale = std::max(1.0, max_abs(Fi.eval(flat)) * max_abs(Fj.eval(flat)));
  return max_abs(vf_lie_bracket(Fi, Fj, flat, source)) / scale;
}

double involutivity_residual(int i, int j, int k, const PhasePoint& x) {
  require(i >= 1 && j >= 1 && k >= 2, ErrorCode::kInvalidArgument, "involutivity_residual needs i, j >= 1 and k >= 2");
  if (i == j) return 0.0;
  const Vector flat = x.flat();
  return std::abs(h_gradient(i, flat).dot(tensor_j(k, x) * h_gradient(j, flat)));
}

double time_dependent_symmetry_residual(int i, int j, double t, const PhasePoint& x, DerivativeSource source) {
  require(i >= 1 && j >= 1, ErrorCode::kInvalidArgument, "time_dependent_symmetry_residual needs i, j >= 1");
  const Dimension d = dims_for_size(x.size());
  const double c = j + 1;  // mu + nu + (j-1)(mu - lambda) with (0, 1, 1)
  const VectorFieldHandle Y = linear_combination(1.0, master_field(d, i), t * c, flow_field(d, i + j));
  const VectorFieldHandle Fj = flow_field(d, j);
  const Vector flat = x.flat();
  return max_abs(Vector(c * flow(i + j, x) + vf_lie_bracket(Y, Fj, flat, source)));
}

double time_dependent_symmetry_defect(int i, int j, double t, double c, const PhasePoint& x,
                                      DerivativeSource source) {
  require(i >= 1 && j >= 1, ErrorCode::kInvalidArgument, "time_dependent_symmetry_defect needs i, j >= 1");
  const Dimension d = dims_for_size(x.size());
  const VectorFieldHandle Y = linear_combination(1.0, master_field(d, i), t * c, flow_field(d, i + j));
  // dY/dt + DY X_j - DX_j Y: zero exactly when Y is carried along by the flow of X_j.
  return max_abs(Vector(c * flow(i + j, x) + vf_lie_bracket(flow_field(d, j), Y, x.flat(), source)));
}

CoefficientFit master_flow_bracket_check(int i, int j, const std::vector<PhasePoint>& points,
                                         DerivativeSource source) {
  require(!points.empty(), ErrorCode::kInvalidArgument, "master_flow_bracket_check needs points");
  const Dimension d = dims_for_size(points.front().size());
  const VectorFieldHandle Xi = master_field(d, i);
  const VectorFieldHandle Fj = flow_field(d, j);
  std::vector<Vector> lhs, target;
  for (const PhasePoint& x : points) {
    lhs.push_back(vf_lie_bracket(Xi, Fj, x.flat(), source));
    target.push_back(flow(i + j, x));
  }
  CoefficientFit f = fit_coefficient(lhs, target);
  f.kind = RelationKind::kCommutator;
  f.i = i;
  f.j = j;
  f.predicted = j;
  return f;
}

MasterX1Comparison compare_master_x1(const PhasePoint& x) {
  const Dimension d = dims_for_size(x.size());
  const VectorFieldHandle diff = linear_combination(1.0, master_field(d, 1), -1.0, x1_field(d));
  const Vector flat = x.flat();
  return MasterX1Comparison{max_abs(diff.eval(flat)), max_abs(vf_lie_bracket(diff, flow_field(d, 1), flat))};
}

}  // namespace kmlab
