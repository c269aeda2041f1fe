#include "kmlab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "kmlab/dynamics.hpp"
#include "kmlab/error.hpp"
#include "kmlab/hierarchy.hpp"
#include "kmlab/json_text.hpp"
#include "kmlab/lax.hpp"
#include "kmlab/maps.hpp"
#include "kmlab/poisson.hpp"
#include "kmlab/symmetries.hpp"

namespace kmlab {

const std::vector<std::pair<std::string, double>>& default_tolerances() {
  static const std::vector<std::pair<std::string, double>> table = {
      {"lax", 1e-12},
      {"newton", 1e-10},
      {"conjugacy", 1e-12},
      {"lift_flow", 1e-12},
      {"antisymmetry", 1e-10},
      {"jacobi_analytic", 1e-10},
      {"jacobi_fd", 1e-6},
      {"jacobi_j4", 1e-5},
      {"compatibility_analytic", 1e-10},
      {"compatibility_fd", 1e-6},
      {"pushforward_j2", 1e-12},
      {"pushforward_j3", 1e-10},
      {"master_lie", 1e-8},
      {"y_action", 1e-8},
      {"lenard_u", 1e-10},
      {"lenard_phase", 1e-8},
      {"bihamiltonian", 1e-8},
      {"h2_closed_form", 1e-12},
      {"conformal", 1e-10},
      {"coefficient", 1e-4},
      {"scalarity", 1e-4},
      {"flow_commute", 1e-5},
      {"involution", 1e-8},
  };
  return table;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"lax",   "conjugacy", "jacobi",  "compatibility", "pushforward",
                                                 "master", "lenard",    "conformal", "oevel",       "commute",
                                                 "involution", "tdsym"};
  return names;
}

namespace {

Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json to_json(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(to_json(Vector(m.row(r).transpose())));
  return rows;
}

Json to_json(const CoefficientFit& f) {
  Json j;
  j["kind"] = to_string(f.kind);
  j["i"] = f.i;
  j["j"] = f.j;
  j["measured"] = f.measured;
  j["predicted"] = f.predicted;
  j["predicted_magnitude"] = f.predicted_magnitude();
  j["magnitude_error"] = std::abs(std::abs(f.measured) - f.predicted_magnitude());
  j["relative_residual"] = f.relative_residual;
  j["scalarity_spread"] = f.scalarity_spread;
  j["scalar"] = f.scalar();
  j["sign_agrees"] = f.sign_agrees();
  j["points"] = f.points;
  return j;
}

class Tolerances {
 public:
  explicit Tolerances(const std::vector<std::pair<std::string, double>>& overrides)
      : table_(default_tolerances()) {
    for (const auto& [name, value] : overrides) {
      auto it = std::find_if(table_.begin(), table_.end(), [&](const auto& e) { return e.first == name; });
      if (it == table_.end()) fail(ErrorCode::kInvalidArgument, "unknown tolerance name: " + name);
      if (!(value > 0.0)) fail(ErrorCode::kInvalidArgument, "tolerance must be positive: " + name);
      it->second = value;
    }
  }

  double operator[](const std::string& name) const {
    for (const auto& [k, v] : table_)
      if (k == name) return v;
    fail(ErrorCode::kInvalidArgument, "unknown tolerance name: " + name);
  }

  Json to_json() const {
    Json j;
    for (const auto& [k, v] : table_) j[k] = v;
    return j;
  }

 private:
  std::vector<std::pair<std::string, double>> table_;
};

// Collects the checks of one suite.
class Suite {
 public:
  Suite(std::string name, const Tolerances& tol) : tol_(tol) { doc_["name"] = std::move(name); }

  // Hard check: residual <= tolerance gates the exit status.
  void hard(const std::string& name, double residual, const std::string& tol_name, int points) {
    const double tol = tol_[tol_name];
    const bool pass = std::isfinite(residual) && residual <= tol;
    passed_ = passed_ && pass;
    Json c;
    c["name"] = name;
    c["kind"] = "hard";
    c["residual"] = residual;
    c["tolerance"] = tol;
    c["tolerance_name"] = tol_name;
    c["points"] = points;
    c["pass"] = pass;
    doc_["checks"].push_back(std::move(c));
  }

  // Informational measurement; never gates.
  void info(const std::string& name, Json value) {
    Json c;
    c["name"] = name;
    c["kind"] = "info";
    c["value"] = std::move(value);
    doc_["checks"].push_back(std::move(c));
  }

  void add_fit(const CoefficientFit& f) {
    Json j = to_json(f);
    const double mag_err = std::abs(std::abs(f.measured) - f.predicted_magnitude());
    const bool pass = f.scalarity_spread < tol_["scalarity"] && mag_err < tol_["coefficient"];
    j["pass"] = pass;
    passed_ = passed_ && pass;
    doc_["fits"].push_back(std::move(j));
  }

  Json& doc() { return doc_; }
  bool passed() const { return passed_; }

  Json finish() {
    doc_["pass"] = passed_;
    return doc_;
  }

 private:
  const Tolerances& tol_;
  Json doc_;
  bool passed_ = true;
};

struct Samples {
  Dimension d;
  std::vector<UPoint> u;
  std::vector<PhasePoint> x;
};

template <typename Point, typename F>
double max_over(const std::vector<Point>& pts, F&& f) {
  double worst = 0.0;
  for (const Point& p : pts) worst = std::max(worst, static_cast<double>(f(p)));
  return worst;
}

void suite_lax(Suite& s, const Samples& smp) {
  const int P = static_cast<int>(smp.u.size());
  s.hard("lax_residual", max_over(smp.u, [](const UPoint& u) { return lax_residual(u); }), "lax", P);
  s.hard("lax_l_symmetry", max_over(smp.u, [](const UPoint& u) {
           const Matrix L = lax_l(u);
           return max_abs(Matrix(L - L.transpose()));
         }), "lax", P);
  s.hard("lax_b_antisymmetry", max_over(smp.u, [](const UPoint& u) { return antisymmetry_defect(lax_b(u)); }), "lax", P);
  s.hard("newton_identities_k1_to_4", max_over(smp.u, [](const UPoint& u) {
           const std::vector<double> r = newton_residuals(u, 4);
           const std::vector<double> H = invariants(u, 4);
           double worst = 0.0;
           for (std::size_t k = 0; k < r.size(); ++k) worst = std::max(worst, r[k] / std::max(1.0, std::abs(H[k])));
           return worst;
         }), "newton", P);
  s.hard("h1_equals_twice_sum_u", max_over(smp.u, [](const UPoint& u) {
           return std::abs(invariants(u, 1)[0] - 2.0 * km_hamiltonian(u)) / std::max(1.0, std::abs(invariants(u, 1)[0]));
         }), "newton", P);
}

void suite_conjugacy(Suite& s, const Samples& smp) {
  s.hard("henon_conjugacy", max_over(smp.u, [](const UPoint& u) { return conjugacy_residual(u); }), "conjugacy",
         static_cast<int>(smp.u.size()));
  s.hard("lifted_flow_projects_to_km", max_over(smp.x, [](const PhasePoint& x) {
           const Vector lifted = volterra_jacobian(x) * flow(1, x);
           return max_abs(Vector(lifted - km_rhs(volterra_map(x))));
         }), "lift_flow", static_cast<int>(smp.x.size()));
}

void suite_jacobi(Suite& s, const Samples& smp) {
  const int Pu = static_cast<int>(smp.u.size());
  const int Px = static_cast<int>(smp.x.size());
  const BivectorField p2 = pi2_field(smp.d);
  const BivectorField p3 = pi3_field(smp.d);
  const BivectorField J3 = j3_field(smp.d);
  const BivectorField J3fd = without_partials(J3);
  const BivectorField J4 = tensor_field(smp.d, 4);
  s.hard("pi2", max_over(smp.u, [&](const UPoint& u) { return jacobi_residual(p2, u.u); }), "jacobi_analytic", Pu);
  s.hard("pi3", max_over(smp.u, [&](const UPoint& u) { return jacobi_residual(p3, u.u); }), "jacobi_analytic", Pu);
  s.hard("J2", max_over(smp.x, [&](const PhasePoint& x) { return jacobi_residual(j2_field(smp.d), x.flat()); }),
         "jacobi_analytic", Px);
  s.hard("J3_fd_partials", max_over(smp.x, [&](const PhasePoint& x) { return jacobi_residual(J3fd, x.flat()); }),
         "jacobi_fd", Px);
  s.hard("J3_analytic_partials", max_over(smp.x, [&](const PhasePoint& x) { return jacobi_residual(J3, x.flat()); }),
         "jacobi_analytic", Px);
  s.hard("J4", max_over(smp.x, [&](const PhasePoint& x) { return jacobi_residual(J4, x.flat()); }), "jacobi_j4", Px);
  s.hard("J4_antisymmetry", max_over(smp.x, [](const PhasePoint& x) { return antisymmetry_defect(tensor_j(4, x)); }),
         "antisymmetry", Px);
  s.hard("J3_antisymmetry", max_over(smp.x, [](const PhasePoint& x) { return antisymmetry_defect(j3_oracle(x)); }),
         "antisymmetry", Px);
}

void suite_compatibility(Suite& s, const Samples& smp) {
  const BivectorField J2 = j2_field(smp.d);
  const BivectorField J3 = j3_field(smp.d);
  s.hard("pi2_plus_pi3", max_over(smp.u, [&](const UPoint& u) {
           return compatibility_residual(pi2_field(smp.d), pi3_field(smp.d), u.u);
         }), "compatibility_analytic", static_cast<int>(smp.u.size()));
  s.hard("J2_plus_J3_fd_partials", max_over(smp.x, [&](const PhasePoint& x) {
           return compatibility_residual(J2, without_partials(J3), x.flat());
         }), "compatibility_fd", static_cast<int>(smp.x.size()));
  s.hard("J2_plus_J3_analytic", max_over(smp.x, [&](const PhasePoint& x) {
           return compatibility_residual(J2, J3, x.flat());
         }), "compatibility_analytic", static_cast<int>(smp.x.size()));
}

void suite_pushforward(Suite& s, const Samples& smp) {
  const int P = static_cast<int>(smp.x.size());
  s.hard("J2_to_pi2", max_over(smp.x, [&](const PhasePoint& x) {
           return pushforward_residual(x, j2_field(smp.d), pi2_field(smp.d));
         }), "pushforward_j2", P);
  s.hard("J3_to_pi3", max_over(smp.x, [&](const PhasePoint& x) {
           return pushforward_residual(x, j3_field(smp.d), pi3_field(smp.d));
         }), "pushforward_j3", P);
}

void suite_master(Suite& s, const Samples& smp) {
  const int Pu = static_cast<int>(smp.u.size());
  const VectorFieldHandle Y0 = y0_field(smp.d);
  const VectorFieldHandle Y1 = y1_field(smp.d);
  const BivectorField p2 = pi2_field(smp.d);
  const BivectorField p3 = pi3_field(smp.d);

  // L_{Y1} pi2 against pi3: magnitude gates, sign is reported.
  std::vector<Vector> lhs, target;
  double literal = 0.0;
  for (const UPoint& u : smp.u) {
    const Matrix L = lie_derivative_bivector(Y1, p2, u.u);
    const Matrix T = pi3(u);
    literal = std::max(literal, max_abs(Matrix(L - T)));
    lhs.push_back(Eigen::Map<const Vector>(L.data(), L.size()));
    target.push_back(Eigen::Map<const Vector>(T.data(), T.size()));
  }
  const CoefficientFit y_fit = fit_coefficient(lhs, target);
  s.hard("lie_Y1_pi2_magnitude_vs_pi3", std::abs(std::abs(y_fit.measured) - 1.0) + y_fit.relative_residual,
         "master_lie", Pu);
  s.info("lie_Y1_pi2_coefficient", y_fit.measured);
  s.info("lie_Y1_pi2_minus_pi3_literal", literal);

  // L_{X1} J2 against J3.
  CoefficientFit x_fit = deformation_coeff_with(x1_field(smp.d), 1, 2, smp.x);
  s.hard("lie_X1_J2_magnitude_vs_J3", std::abs(std::abs(x_fit.measured) - 1.0) + x_fit.relative_residual,
         "master_lie", static_cast<int>(smp.x.size()));
  s.info("lie_X1_J2_coefficient", x_fit.measured);

  // Y_i(H_j) = (i + j) H_{i+j} for i in {0, 1}, j <= 3.
  for (int i = 0; i <= 1; ++i) {
    const VectorFieldHandle& Y = i == 0 ? Y0 : Y1;
    for (int j = 1; j <= 3; ++j) {
      const double worst = max_over(smp.u, [&](const UPoint& u) {
        const double lhs_v = Y.eval(u.u).dot(invariant_gradient(u, j));
        const double rhs_v = (i + j) * invariants(u, i + j).back();
        return std::abs(lhs_v - rhs_v) / std::max(1.0, std::abs(rhs_v));
      });
      s.hard("Y" + std::to_string(i) + "_H" + std::to_string(j), worst, "y_action", Pu);
    }
  }

  // [Y0, Y1] fitted against Y1.
  lhs.clear();
  target.clear();
  for (const UPoint& u : smp.u) {
    lhs.push_back(vf_lie_bracket(Y0, Y1, u.u));
    target.push_back(Y1.eval(u.u));
  }
  const CoefficientFit yy = fit_coefficient(lhs, target);
  Json bracket;
  bracket["coefficient"] = yy.measured;
  bracket["relative_residual"] = yy.relative_residual;
  s.info("bracket_Y0_Y1_vs_Y1", bracket);

  const std::vector<J3Discrepancy> disc = j3_discrepancies(smp.x);
  Json list = Json::array();
  for (const J3Discrepancy& e : disc) {
    Json j;
    j["row"] = e.row;
    j["col"] = e.col;
    j["max_difference"] = e.max_difference;
    list.push_back(j);
  }
  s.info("j3_closed_vs_oracle_discrepancies", list);

  double diff = 0.0, comm = 0.0;
  for (const PhasePoint& x : smp.x) {
    const MasterX1Comparison c = compare_master_x1(x);
    diff = std::max(diff, c.difference);
    comm = std::max(comm, c.commutator);
  }
  Json cmp;
  cmp["max_difference"] = diff;
  cmp["max_commutator_with_flow1"] = comm;
  s.info("RX0_vs_explicit_X1", cmp);
}

void suite_lenard(Suite& s, const Samples& smp) {
  const int Pu = static_cast<int>(smp.u.size());
  const int Px = static_cast<int>(smp.x.size());
  for (int i = 1; i <= 4; ++i)
    s.hard("u_space_i" + std::to_string(i), max_over(smp.u, [&](const UPoint& u) { return lenard_residual_u(i, u); }),
           "lenard_u", Pu);
  for (int i = 1; i <= 3; ++i)
    s.hard("phase_space_i" + std::to_string(i),
           max_over(smp.x, [&](const PhasePoint& x) { return lenard_residual_phase(i, x); }), "lenard_phase", Px);
  s.hard("bihamiltonian_J2_h2_vs_J3_h1", max_over(smp.x, [&](const PhasePoint& x) {
           const Vector flat = x.flat();
           const Matrix J = j2(smp.d);
           return max_abs(Vector(J * h_gradient(2, flat) - j3_oracle(x) * h_gradient(1, flat)));
         }), "bihamiltonian", Px);
  s.hard("flow2_vs_J2_h2", max_over(smp.x, [&](const PhasePoint& x) {
           return max_abs(Vector(flow(2, x) - j2(smp.d) * h_gradient(2, x.flat())));
         }), "bihamiltonian", Px);
  s.hard("h2_closed_form", max_over(smp.x, [&](const PhasePoint& x) {
           const int N = x.size();
           auto q = [&](int k) { return (k >= 1 && k <= N) ? x.q[k - 1] : 0.0; };
           auto p = [&](int k) { return (k >= 1 && k <= N) ? x.p[k - 1] : 0.0; };
           double closed = 0.0;
           for (int i = 1; i <= N; ++i) closed += 0.5 * std::exp(2 * p(i) + q(i + 1) - q(i - 1));
           for (int i = 1; i <= N - 1; ++i)
             closed += std::exp(p(i) + p(i + 1) + 0.5 * (q(i + 2) + q(i + 1) - q(i) - q(i - 1)));
           return std::abs(h_k(2, x) - closed) / std::max(1.0, std::abs(closed));
         }), "h2_closed_form", Px);
}

void suite_conformal(Suite& s, const Samples& smp) {
  const ConformalConstants c = conformal_constants(smp.x);
  const int P = static_cast<int>(smp.x.size());
  s.hard("lambda", std::abs(c.lambda) + c.lambda_residual, "conformal", P);
  s.hard("mu", std::abs(c.mu - 1.0) + c.mu_residual, "conformal", P);
  s.hard("nu", std::abs(c.nu - 1.0) + c.nu_residual, "conformal", P);
  Json j;
  j["lambda"] = c.lambda;
  j["mu"] = c.mu;
  j["nu"] = c.nu;
  j["lambda_exact_zero"] = c.lambda_exact_zero;
  j["lambda_residual"] = c.lambda_residual;
  j["mu_residual"] = c.mu_residual;
  j["nu_residual"] = c.nu_residual;
  s.info("constants", j);
}

void suite_oevel(Suite& s, const Samples& smp) {
  s.doc()["fits"] = Json::array();
  for (int sum_ij = 2; sum_ij <= 4; ++sum_ij)
    for (int i = 0; i <= sum_ij - 2; ++i) s.add_fit(deformation_coeff(i, sum_ij - i, smp.x));
  for (int sum_ij = 1; sum_ij <= 4; ++sum_ij)
    for (int i = 0; i <= sum_ij - 1; ++i) s.add_fit(ham_deformation_check(i, sum_ij - i, smp.x));
  for (int sum_ij = 1; sum_ij <= 4; ++sum_ij)
    for (int i = 0; 2 * i < sum_ij; ++i) s.add_fit(master_commutator_check(i, sum_ij - i, smp.x));
}

void suite_commute(Suite& s, const Samples& smp) {
  for (int i = 1; i <= 3; ++i)
    for (int j = i + 1; j <= 3; ++j)
      s.hard("flows_" + std::to_string(i) + "_" + std::to_string(j),
             max_over(smp.x, [&](const PhasePoint& x) { return flow_commutator_residual(i, j, x); }), "flow_commute",
             static_cast<int>(smp.x.size()));
}

void suite_involution(Suite& s, const Samples& smp) {
  for (int k = 2; k <= 3; ++k)
    for (int i = 1; i <= 4; ++i)
      for (int j = i + 1; j <= 4; ++j)
        s.hard("h" + std::to_string(i) + "_h" + std::to_string(j) + "_J" + std::to_string(k),
               max_over(smp.x, [&](const PhasePoint& x) { return involutivity_residual(i, j, k, x); }), "involution",
               static_cast<int>(smp.x.size()));
}

void suite_tdsym(Suite& s, const Samples& smp) {
  const CoefficientFit fit = master_flow_bracket_check(1, 1, smp.x);
  s.info("master_flow_bracket_1_1", to_json(fit));
  Json rows = Json::array();
  for (double t : {0.0, 0.5, 1.0}) {
    Json r;
    r["i"] = 1;
    r["j"] = 1;
    r["t"] = t;
    r["constant"] = 2.0;
    r["max_residual"] = max_over(smp.x, [&](const PhasePoint& x) { return time_dependent_symmetry_residual(1, 1, t, x); });
    r["max_defect_flow_orientation"] =
        max_over(smp.x, [&](const PhasePoint& x) { return time_dependent_symmetry_defect(1, 1, t, 2.0, x); });
    r["max_defect_measured_constant"] =
        max_over(smp.x, [&](const PhasePoint& x) { return time_dependent_symmetry_defect(1, 1, t, fit.measured, x); });
    rows.push_back(r);
  }
  s.info("time_dependent_symmetry", rows);
}

using SuiteFn = std::function<void(Suite&, const Samples&)>;

const std::map<std::string, SuiteFn>& suite_table() {
  static const std::map<std::string, SuiteFn> table = {
      {"lax", suite_lax},         {"conjugacy", suite_conjugacy},   {"jacobi", suite_jacobi},
      {"compatibility", suite_compatibility}, {"pushforward", suite_pushforward}, {"master", suite_master},
      {"lenard", suite_lenard},   {"conformal", suite_conformal},   {"oevel", suite_oevel},
      {"commute", suite_commute}, {"involution", suite_involution}, {"tdsym", suite_tdsym},
  };
  return table;
}

std::vector<std::string> resolve_suites(const std::vector<std::string>& requested) {
  std::vector<std::string> out;
  if (requested.empty()) return suite_names();
  for (const std::string& name : requested) {
    if (name == "all") return suite_names();
    if (!suite_table().count(name)) fail(ErrorCode::kInvalidArgument, "unknown suite: " + name);
  }
  // Report order follows suite_names(), independent of flag order.
  for (const std::string& name : suite_names())
    if (std::find(requested.begin(), requested.end(), name) != requested.end()) out.push_back(name);
  return out;
}

Json config_json(const RunConfig& cfg, const Dimension& d) {
  Json c;
  c["n"] = cfg.n;
  c["N"] = d.N;
  c["M"] = d.M;
  c["seed"] = cfg.seed;
  c["points"] = cfg.points;
  c["prng"] = kPrngName;
  return c;
}

Json header(const char* command) {
  Json t;
  t["name"] = kToolName;
  t["version"] = kToolVersion;
  t["command"] = command;
  return t;
}

void validate_common(const RunConfig& cfg) {
  if (cfg.n < 1) fail(ErrorCode::kInvalidDimension, "n must be >= 1");
  if (cfg.points < 1) fail(ErrorCode::kInvalidArgument, "points must be >= 1");
}

}  // namespace

RunOutput run_verify(const RunConfig& cfg) {
  validate_common(cfg);
  if (cfg.format != OutputFormat::kJson) fail(ErrorCode::kInvalidArgument, "verify only writes JSON");
  const Tolerances tol(cfg.tol_overrides);
  Samples smp;
  smp.d = dims(cfg.n);
  smp.u = sample_u(SampleSpec{cfg.seed, cfg.points, {}}, smp.d);
  smp.x = sample_phase(SampleSpec{cfg.seed, cfg.points, {}}, smp.d);

  Json doc;
  doc["tool"] = header("verify");
  doc["config"] = config_json(cfg, smp.d);
  doc["tolerances"] = tol.to_json();
  doc["suites"] = Json::array();
  bool passed = true;
  for (const std::string& name : resolve_suites(cfg.suites)) {
    Suite s(name, tol);
    s.doc()["checks"] = Json::array();
    suite_table().at(name)(s, smp);
    passed = passed && s.passed();
    doc["suites"].push_back(s.finish());
  }
  doc["pass"] = passed;
  return RunOutput{to_json_text(doc), "", passed};
}

namespace {

Vector initial_state(const RunConfig& cfg, const Dimension& d) {
  if (cfg.space == Space::kU) {
    if (cfg.init_q || cfg.init_p) fail(ErrorCode::kInvalidArgument, "u-space run needs a {\"u\": [...]} initial state");
    if (cfg.init_u) {
      if (cfg.init_u->size() != d.N) fail(ErrorCode::kDimensionMismatch, "initial u has the wrong length for n");
      for (Eigen::Index i = 0; i < d.N; ++i)
        if (!((*cfg.init_u)[i] > 0.0)) fail(ErrorCode::kDomain, "initial u must be strictly positive");
      return *cfg.init_u;
    }
    return sample_points(SampleSpec{cfg.seed, 1, {}}, d, Space::kU).front();
  }
  if (cfg.init_u) fail(ErrorCode::kInvalidArgument, "phase-space run needs a {\"q\": [...], \"p\": [...]} initial state");
  if (cfg.init_q || cfg.init_p) {
    if (!cfg.init_q || !cfg.init_p) fail(ErrorCode::kInvalidArgument, "initial state needs both q and p");
    if (cfg.init_q->size() != d.N || cfg.init_p->size() != d.N)
      fail(ErrorCode::kDimensionMismatch, "initial q/p have the wrong length for n");
    return PhasePoint{*cfg.init_q, *cfg.init_p}.flat();
  }
  return sample_points(SampleSpec{cfg.seed, 1, {}}, d, Space::kPhase).front();
}

Json drift_json(const DriftReport& r) {
  Json j;
  j["method"] = r.method;
  j["steps"] = r.steps;
  j["invariant_drift"] = to_json(r.invariant_drift);
  j["eigen_drift"] = to_json(r.eigen_drift);
  j["max_invariant_drift"] = r.max_invariant_drift;
  j["max_eigen_drift"] = r.max_eigen_drift;
  return j;
}

}  // namespace

RunOutput run_integrate(const RunConfig& cfg) {
  validate_common(cfg);
  if (!(cfg.t1 > 0.0) || !(cfg.dt > 0.0) || cfg.dt > cfg.t1)
    fail(ErrorCode::kInvalidArgument, "integrate needs t1 > 0 and 0 < dt <= t1");
  if (cfg.kmax < 1) fail(ErrorCode::kInvalidArgument, "kmax must be >= 1");
  const Dimension d = dims(cfg.n);
  const Vector x0 = initial_state(cfg, d);
  const VectorFunction f = cfg.space == Space::kU ? km_flow() : phase_flow();
  const Trajectory traj = integrate(f, x0, cfg.t1, cfg.dt, MonitorSpec{cfg.space, cfg.kmax});

  RunOutput out;
  out.passed = !traj.failed;
  const bool phase = cfg.space == Space::kPhase;

  if (cfg.format == OutputFormat::kCsv) {
    std::string csv = "t";
    if (phase) {
      for (int i = 1; i <= d.N; ++i) csv += ",q_" + std::to_string(i);
      for (int i = 1; i <= d.N; ++i) csv += ",p_" + std::to_string(i);
      for (int i = 1; i <= d.N; ++i) csv += ",psi_u_" + std::to_string(i);
    } else {
      for (int i = 1; i <= d.N; ++i) csv += ",u_" + std::to_string(i);
    }
    for (int k = 1; k <= cfg.kmax; ++k) csv += ",H_" + std::to_string(k);
    for (int k = 1; k <= d.lax_size; ++k) csv += ",lambda_" + std::to_string(k);
    csv += '\n';
    for (std::size_t r = 0; r < traj.times.size(); ++r) {
      csv += format_double(traj.times[r]);
      const Vector& x = traj.states[r];
      for (Eigen::Index c = 0; c < x.size(); ++c) csv += "," + format_double(x[c]);
      if (phase) {
        const Vector u = volterra_map(x).u;
        for (Eigen::Index c = 0; c < u.size(); ++c) csv += "," + format_double(u[c]);
      }
      for (double h : traj.invariant_series[r]) csv += "," + format_double(h);
      const Vector& lam = traj.spectrum_series[r];
      for (Eigen::Index c = 0; c < lam.size(); ++c) csv += "," + format_double(lam[c]);
      csv += '\n';
    }
    out.text = std::move(csv);
  } else {
    Json doc;
    doc["tool"] = header("integrate");
    doc["space"] = phase ? "phase" : "u";
    doc["times"] = to_json(traj.times);
    Json states = Json::array();
    for (const Vector& x : traj.states) states.push_back(to_json(x));
    doc["states"] = states;
    Json inv = Json::array();
    for (const auto& h : traj.invariant_series) inv.push_back(to_json(h));
    doc["invariants"] = inv;
    Json spec = Json::array();
    for (const Vector& l : traj.spectrum_series) spec.push_back(to_json(l));
    doc["spectrum"] = spec;
    out.text = to_json_text(doc);
  }

  Json summary;
  summary["tool"] = header("integrate");
  summary["n"] = cfg.n;
  summary["seed"] = cfg.seed;
  summary["space"] = phase ? "phase" : "u";
  summary["t1"] = cfg.t1;
  summary["dt"] = cfg.dt;
  summary["kmax"] = cfg.kmax;
  summary["output_stride"] = output_stride(cfg.dt);
  summary["initial_state"] = to_json(x0);
  summary["failed"] = traj.failed;
  if (traj.failed) summary["failure"] = traj.failure;
  summary["drift"] = drift_json(drift_report(traj));
  out.summary = to_json_text(summary, false);
  return out;
}

RunOutput run_hierarchy(const RunConfig& cfg) {
  validate_common(cfg);
  if (cfg.format != OutputFormat::kJson) fail(ErrorCode::kInvalidArgument, "hierarchy only writes JSON");
  if (cfg.kmax < 2 || cfg.kmax > 6) fail(ErrorCode::kInvalidArgument, "hierarchy needs 2 <= kmax <= 6");
  const Dimension d = dims(cfg.n);
  PhasePoint x = PhasePoint::origin(d);
  std::string point_source = "origin";
  if (!cfg.origin) {
    if (cfg.init_q || cfg.init_p) {
      if (!cfg.init_q || !cfg.init_p || cfg.init_q->size() != d.N || cfg.init_p->size() != d.N)
        fail(ErrorCode::kDimensionMismatch, "hierarchy initial point needs q and p of length 2n-1");
      x = PhasePoint{*cfg.init_q, *cfg.init_p};
      point_source = "file";
    } else {
      x = sample_phase(SampleSpec{cfg.seed, 1, {}}, d).front();
      point_source = "seeded";
    }
  }

  Json doc;
  doc["tool"] = header("hierarchy");
  doc["config"] = config_json(cfg, d);
  doc["kmax"] = cfg.kmax;
  Json pt;
  pt["source"] = point_source;
  pt["q"] = to_json(x.q);
  pt["p"] = to_json(x.p);
  doc["point"] = pt;
  doc["coordinates"] = "flat (q_1..q_N, p_1..p_N); matrix entry (a, b) = {x_a, x_b}";
  doc["R"] = to_json(recursion(x));
  Json tensors;
  for (int k = 2; k <= cfg.kmax; ++k) tensors["J" + std::to_string(k)] = to_json(tensor_j(k, x));
  doc["tensors"] = tensors;
  Json flows;
  for (int k = 1; k <= cfg.kmax; ++k) flows["X" + std::to_string(k)] = to_json(flow(k, x));
  doc["flows"] = flows;
  Json masters;
  for (int k = 0; k <= cfg.kmax - 2; ++k) masters["X" + std::to_string(k)] = to_json(master_x(k, x));
  doc["master_symmetries"] = masters;
  Json hs;
  for (int k = 1; k <= cfg.kmax; ++k) hs["h" + std::to_string(k)] = h_k(k, x);
  doc["hamiltonians"] = hs;
  return RunOutput{to_json_text(doc), "", true};
}

RunOutput run_spectrum(const RunConfig& cfg) {
  validate_common(cfg);
  if (cfg.format != OutputFormat::kJson) fail(ErrorCode::kInvalidArgument, "spectrum only writes JSON");
  if (cfg.kmax < 1) fail(ErrorCode::kInvalidArgument, "kmax must be >= 1");
  const Dimension d = dims(cfg.n);
  UPoint u;
  std::string point_source = "seeded";
  if (cfg.init_q || cfg.init_p) fail(ErrorCode::kInvalidArgument, "spectrum needs a u-space point");
  if (cfg.init_u) {
    if (cfg.init_u->size() != d.N) fail(ErrorCode::kDimensionMismatch, "u has the wrong length for n");
    u = UPoint{*cfg.init_u};
    point_source = "file";
  } else {
    u = sample_u(SampleSpec{cfg.seed, 1, {}}, d).front();
  }
  const Vector lambda = spectrum(u);
  const std::vector<double> H = invariants(u, cfg.kmax);
  const std::vector<double> newton = newton_residuals(u, cfg.kmax);
  std::vector<double> power_sums;
  for (int k = 1; k <= cfg.kmax; ++k) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) s += std::pow(lambda[i], k);
    power_sums.push_back(s);
  }
  double worst = 0.0;
  for (int k = 0; k < cfg.kmax; ++k) worst = std::max(worst, newton[static_cast<std::size_t>(k)] / std::max(1.0, std::abs(H[static_cast<std::size_t>(k)])));

  Json doc;
  doc["tool"] = header("spectrum");
  doc["config"] = config_json(cfg, d);
  doc["point_source"] = point_source;
  doc["u"] = to_json(u.u);
  doc["eigenvalues"] = to_json(lambda);
  doc["invariants"] = to_json(H);
  doc["power_sums"] = to_json(power_sums);
  doc["newton_residuals"] = to_json(newton);
  doc["max_newton_relative_residual"] = worst;
  const bool pass = worst <= 1e-10;
  doc["newton_pass"] = pass;
  return RunOutput{to_json_text(doc), "", pass};
}

}  // namespace kmlab
