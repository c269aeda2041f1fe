#include "kmlab/kmlab.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <string>

#include "kmlab/error.hpp"
#include "kmlab/hierarchy.hpp"
#include "kmlab/lax.hpp"
#include "kmlab/maps.hpp"
#include "kmlab/poisson.hpp"
#include "kmlab/runner.hpp"
#include "kmlab/symmetries.hpp"

struct kml_context {
  kmlab::Dimension d;
};

struct kml_run_options {
  kmlab::RunConfig cfg;
};

struct kml_result {
  std::string text;
  std::string summary;
  bool passed = false;
};

namespace {

thread_local std::string g_last_error;

kml_status to_status(kmlab::ErrorCode code) {
  switch (code) {
    case kmlab::ErrorCode::kInvalidDimension: return KML_ERR_INVALID_DIMENSION;
    case kmlab::ErrorCode::kDomain: return KML_ERR_DOMAIN;
    case kmlab::ErrorCode::kDimensionMismatch: return KML_ERR_DIMENSION_MISMATCH;
    case kmlab::ErrorCode::kInvalidArgument: return KML_ERR_INVALID_ARGUMENT;
    case kmlab::ErrorCode::kIntegrationFailure: return KML_ERR_INTEGRATION_FAILURE;
  }
  return KML_ERR_INTERNAL;
}

template <typename F>
kml_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return KML_OK;
  } catch (const kmlab::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return KML_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return KML_ERR_INTERNAL;
  }
}

kml_status null_error(const char* what) {
  g_last_error = std::string("null pointer: ") + what;
  return KML_ERR_NULL_POINTER;
}

#define KML_REQUIRE(ptr)                \
  do {                                  \
    if (!(ptr)) return null_error(#ptr); \
  } while (0)

kmlab::Vector read_vec(const double* data, int len) { return Eigen::Map<const kmlab::Vector>(data, len); }

kmlab::UPoint read_u(const kml_context* ctx, const double* u) { return kmlab::UPoint{read_vec(u, ctx->d.N)}; }

kmlab::PhasePoint read_x(const kml_context* ctx, const double* x) {
  return kmlab::PhasePoint::from_flat(read_vec(x, ctx->d.M));
}

void write_vec(const kmlab::Vector& v, double* out) { std::memcpy(out, v.data(), sizeof(double) * v.size()); }

void write_mat(const kmlab::Matrix& m, double* out) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out[r * m.cols() + c] = m(r, c);
}

kml_status run(kmlab::RunOutput (*fn)(const kmlab::RunConfig&), const kml_run_options* opts, kml_result** out) {
  KML_REQUIRE(opts);
  KML_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    kmlab::RunOutput r = fn(opts->cfg);
    *out = new kml_result{std::move(r.text), std::move(r.summary), r.passed};
  });
}

}  // namespace

extern "C" {

const char* kml_version(void) { return kmlab::kToolVersion; }

const char* kml_last_error(void) { return g_last_error.c_str(); }

const char* kml_status_string(kml_status status) {
  switch (status) {
    case KML_OK: return "ok";
    case KML_ERR_INVALID_DIMENSION: return "invalid dimension";
    case KML_ERR_DOMAIN: return "domain error";
    case KML_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
    case KML_ERR_INVALID_ARGUMENT: return "invalid argument";
    case KML_ERR_INTEGRATION_FAILURE: return "integration failure";
    case KML_ERR_NULL_POINTER: return "null pointer";
    case KML_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

kml_status kml_context_create(int n, kml_context** out) {
  KML_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new kml_context{kmlab::dims(n)}; });
}

void kml_context_destroy(kml_context* ctx) { delete ctx; }

int kml_context_n(const kml_context* ctx) { return ctx ? ctx->d.n : 0; }
int kml_context_sites(const kml_context* ctx) { return ctx ? ctx->d.N : 0; }
int kml_context_phase_dim(const kml_context* ctx) { return ctx ? ctx->d.M : 0; }
int kml_context_lax_size(const kml_context* ctx) { return ctx ? ctx->d.lax_size : 0; }

kml_status kml_sample(const kml_context* ctx, uint64_t seed, int count, kml_space space, double* out) {
  KML_REQUIRE(ctx);
  KML_REQUIRE(out);
  return guarded([&] {
    kmlab::require(count >= 1, kmlab::ErrorCode::kInvalidArgument, "count must be >= 1");
    const kmlab::Space s = space == KML_SPACE_PHASE ? kmlab::Space::kPhase : kmlab::Space::kU;
    const auto pts = kmlab::sample_points(kmlab::SampleSpec{seed, count, {}}, ctx->d, s);
    const Eigen::Index stride = pts.front().size();
    for (std::size_t k = 0; k < pts.size(); ++k) write_vec(pts[k], out + static_cast<Eigen::Index>(k) * stride);
  });
}

kml_status kml_km_rhs(const kml_context* ctx, const double* u, double* out) {
  KML_REQUIRE(ctx); KML_REQUIRE(u); KML_REQUIRE(out);
  return guarded([&] { write_vec(kmlab::km_rhs(read_u(ctx, u)), out); });
}

kml_status kml_lax_l(const kml_context* ctx, const double* u, double* out) {
  KML_REQUIRE(ctx); KML_REQUIRE(u); KML_REQUIRE(out);
  return guarded([&] { write_mat(kmlab::lax_l(read_u(ctx, u)), out); });
}

kml_status kml_lax_b(const kml_context* ctx, const double* u, double* out) {
  KML_REQUIRE(ctx); KML_REQUIRE(u); KML_REQUIRE(out);
  return guarded([&] { write_mat(kmlab::lax_b(read_u(ctx, u)), out); });
}

kml_status kml_lax_residual(const kml_context* ctx, const double* u, double* out) {
  KML_REQUIRE(ctx); KML_REQUIRE(u); KML_REQUIRE(out);
  return guarded([&] { *out = kmlab::lax_residual(read_u(ctx, u)); });
}

kml_status kml_invariants(const kml_context* ctx, const double* u, int kmax, double* out) {
  KML_REQUIRE(ctx); KML_REQUIRE(u); KML_REQUIRE(out);
  return guarded([&] {
    const auto H = kmlab::invariants(read_u(ctx, u), kmax);
    std::memcpy(out, H.data(), sizeof(double) * H.size());
  });
}

kml_status kml_spectrum(const kml_context* ctx, const double* u, double* out) {
  KML_REQUIRE(ctx); KML_REQUIRE(u); KML_REQUIRE(out);
  return guarded([&] { write_vec(kmlab::spectrum(read_u(ctx, u)), out); });
}

kml_status kml_pi2(const kml_context* ctx, const double* u, double* out) {
  KML_REQUIRE(ctx); KML_REQUIRE(u); KML_REQUIRE(out);
  return guarded([&] { write_mat(kmlab::pi2(read_u(ctx, u)), out); });
}

kml_status kml_pi3(const kml_context* ctx, const double* u, double* out) {
  KML_REQUIRE(ctx); KML_REQUIRE(u); KML_REQUIRE(out);
  return guarded([&] { write_mat(kmlab::pi3(read_u(ctx, u)), out); });
}

kml_status kml_master_y1(const kml_context* ctx, const double* u, double* out) {
  KML_REQUIRE(ctx); KML_REQUIRE(u); KML_REQUIRE(out);
  return guarded([&] { write_vec(kmlab::master_y1(read_u(ctx, u)), out); });
}

kml_status kml_henon_map(const kml_context* ctx, const double* u, double* a, double* b) {
  KML_REQUIRE(ctx); KML_REQUIRE(u); KML_REQUIRE(b);
  if (ctx->d.n > 1) KML_REQUIRE(a);
  return guarded([&] {
    const kmlab::TodaPoint t = kmlab::henon_map(read_u(ctx, u));
    if (t.a.size() > 0) write_vec(t.a, a);
    write_vec(t.b, b);
  });
}

kml_status kml_conjugacy_residual(const kml_context* ctx, const double* u, double* out) {
  KML_REQUIRE(ctx); KML_REQUIRE(u); KML_REQUIRE(out);
  return guarded([&] { *out = kmlab::conjugacy_residual(read_u(ctx, u)); });
}

kml_status kml_volterra_map(const kml_context* ctx, const double* x, double* u_out) {
  KML_REQUIRE(ctx); KML_REQUIRE(x); KML_REQUIRE(u_out);
  return guarded([&] { write_vec(kmlab::volterra_map(read_x(ctx, x)).u, u_out); });
}

kml_status kml_j2(const kml_context* ctx, double* out) {
  KML_REQUIRE(ctx); KML_REQUIRE(out);
  return guarded([&] { write_mat(kmlab::j2(ctx->d), out); });
}

kml_status kml_j3(const kml_context* ctx, const double* x, double* out) {
  KML_REQUIRE(ctx); KML_REQUIRE(x); KML_REQUIRE(out);
  return guarded([&] { write_mat(kmlab::j3_oracle(read_x(ctx, x)), out); });
}

kml_status kml_j3_closed(const kml_context* ctx, const double* x, double* out) {
  KML_REQUIRE(ctx); KML_REQUIRE(x); KML_REQUIRE(out);
  return guarded([&] { write_mat(kmlab::j3_closed(read_x(ctx, x)), out); });
}

kml_status kml_tensor_j(const kml_context* ctx, int k, const double* x, double* out) {
  KML_REQUIRE(ctx); KML_REQUIRE(x); KML_REQUIRE(out);
  return guarded([&] { write_mat(kmlab::tensor_j(k, read_x(ctx, x)), out); });
}

kml_status kml_recursion(const kml_context* ctx, const double* x, double* out) {
  KML_REQUIRE(ctx); KML_REQUIRE(x); KML_REQUIRE(out);
  return guarded([&] { write_mat(kmlab::recursion(read_x(ctx, x)), out); });
}

kml_status kml_flow(const kml_context* ctx, int k, const double* x, double* out) {
  KML_REQUIRE(ctx); KML_REQUIRE(x); KML_REQUIRE(out);
  return guarded([&] { write_vec(kmlab::flow(k, read_x(ctx, x)), out); });
}

kml_status kml_master_x(const kml_context* ctx, int k, const double* x, double* out) {
  KML_REQUIRE(ctx); KML_REQUIRE(x); KML_REQUIRE(out);
  return guarded([&] { write_vec(kmlab::master_x(k, read_x(ctx, x)), out); });
}

kml_status kml_h(const kml_context* ctx, int k, const double* x, double* out) {
  KML_REQUIRE(ctx); KML_REQUIRE(x); KML_REQUIRE(out);
  return guarded([&] { *out = kmlab::h_k(k, read_x(ctx, x)); });
}

kml_status kml_jacobi_residual(const kml_context* ctx, kml_tensor tensor, const double* point, int use_fd,
                               double* out) {
  KML_REQUIRE(ctx); KML_REQUIRE(point); KML_REQUIRE(out);
  return guarded([&] {
    kmlab::BivectorField pi;
    bool u_space = false;
    switch (tensor) {
      case KML_TENSOR_PI2: pi = kmlab::pi2_field(ctx->d); u_space = true; break;
      case KML_TENSOR_PI3: pi = kmlab::pi3_field(ctx->d); u_space = true; break;
      case KML_TENSOR_J2: pi = kmlab::j2_field(ctx->d); break;
      case KML_TENSOR_J3: pi = kmlab::j3_field(ctx->d); break;
      case KML_TENSOR_J3_CLOSED: pi = kmlab::j3_closed_field(ctx->d); break;
      case KML_TENSOR_J4: pi = kmlab::tensor_field(ctx->d, 4); break;
      default: kmlab::fail(kmlab::ErrorCode::kInvalidArgument, "unknown tensor id");
    }
    if (use_fd) pi = kmlab::without_partials(pi);
    *out = kmlab::jacobi_residual(pi, read_vec(point, u_space ? ctx->d.N : ctx->d.M));
  });
}

kml_status kml_pushforward_residual(const kml_context* ctx, int k, const double* x, double* out) {
  KML_REQUIRE(ctx); KML_REQUIRE(x); KML_REQUIRE(out);
  return guarded([&] {
    const kmlab::PhasePoint p = read_x(ctx, x);
    if (k == 2)
      *out = kmlab::pushforward_residual(p, kmlab::j2_field(ctx->d), kmlab::pi2_field(ctx->d));
    else if (k == 3)
      *out = kmlab::pushforward_residual(p, kmlab::j3_field(ctx->d), kmlab::pi3_field(ctx->d));
    else
      kmlab::fail(kmlab::ErrorCode::kInvalidArgument, "pushforward is defined for k = 2 or 3");
  });
}

kml_status kml_run_options_create(kml_run_options** out) {
  KML_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new kml_run_options{}; });
}

void kml_run_options_destroy(kml_run_options* opts) { delete opts; }

kml_status kml_run_options_set_n(kml_run_options* opts, int n) {
  KML_REQUIRE(opts);
  if (n < 1) {
    g_last_error = "n must be >= 1";
    return KML_ERR_INVALID_DIMENSION;
  }
  opts->cfg.n = n;
  return KML_OK;
}

kml_status kml_run_options_set_seed(kml_run_options* opts, uint64_t seed) {
  KML_REQUIRE(opts);
  opts->cfg.seed = seed;
  return KML_OK;
}

kml_status kml_run_options_set_points(kml_run_options* opts, int points) {
  KML_REQUIRE(opts);
  if (points < 1) {
    g_last_error = "points must be >= 1";
    return KML_ERR_INVALID_ARGUMENT;
  }
  opts->cfg.points = points;
  return KML_OK;
}

kml_status kml_run_options_set_tolerance(kml_run_options* opts, const char* name, double value) {
  KML_REQUIRE(opts);
  KML_REQUIRE(name);
  return guarded([&] {
    const auto& table = kmlab::default_tolerances();
    bool known = false;
    for (const auto& e : table) known = known || e.first == name;
    if (!known) kmlab::fail(kmlab::ErrorCode::kInvalidArgument, std::string("unknown tolerance name: ") + name);
    if (!(value > 0.0)) kmlab::fail(kmlab::ErrorCode::kInvalidArgument, "tolerance must be positive");
    opts->cfg.tol_overrides.emplace_back(name, value);
  });
}

kml_status kml_run_options_add_suite(kml_run_options* opts, const char* name) {
  KML_REQUIRE(opts);
  KML_REQUIRE(name);
  return guarded([&] {
    const std::string s = name;
    const auto& names = kmlab::suite_names();
    if (s != "all" && std::find(names.begin(), names.end(), s) == names.end())
      kmlab::fail(kmlab::ErrorCode::kInvalidArgument, "unknown suite: " + s);
    opts->cfg.suites.push_back(s);
  });
}

kml_status kml_run_options_set_t1(kml_run_options* opts, double t1) {
  KML_REQUIRE(opts);
  opts->cfg.t1 = t1;
  return KML_OK;
}

kml_status kml_run_options_set_dt(kml_run_options* opts, double dt) {
  KML_REQUIRE(opts);
  opts->cfg.dt = dt;
  return KML_OK;
}

kml_status kml_run_options_set_kmax(kml_run_options* opts, int kmax) {
  KML_REQUIRE(opts);
  opts->cfg.kmax = kmax;
  return KML_OK;
}

kml_status kml_run_options_set_space(kml_run_options* opts, kml_space space) {
  KML_REQUIRE(opts);
  if (space != KML_SPACE_U && space != KML_SPACE_PHASE) {
    g_last_error = "unknown space";
    return KML_ERR_INVALID_ARGUMENT;
  }
  opts->cfg.space = space == KML_SPACE_PHASE ? kmlab::Space::kPhase : kmlab::Space::kU;
  return KML_OK;
}

kml_status kml_run_options_set_format(kml_run_options* opts, kml_format format) {
  KML_REQUIRE(opts);
  if (format != KML_FORMAT_JSON && format != KML_FORMAT_CSV) {
    g_last_error = "unknown format";
    return KML_ERR_INVALID_ARGUMENT;
  }
  opts->cfg.format = format == KML_FORMAT_CSV ? kmlab::OutputFormat::kCsv : kmlab::OutputFormat::kJson;
  return KML_OK;
}

kml_status kml_run_options_set_init_u(kml_run_options* opts, const double* u, size_t len) {
  KML_REQUIRE(opts);
  KML_REQUIRE(u);
  opts->cfg.init_u = read_vec(u, static_cast<int>(len));
  opts->cfg.init_q.reset();
  opts->cfg.init_p.reset();
  return KML_OK;
}

kml_status kml_run_options_set_init_phase(kml_run_options* opts, const double* q, const double* p, size_t len) {
  KML_REQUIRE(opts);
  KML_REQUIRE(q);
  KML_REQUIRE(p);
  opts->cfg.init_q = read_vec(q, static_cast<int>(len));
  opts->cfg.init_p = read_vec(p, static_cast<int>(len));
  opts->cfg.init_u.reset();
  return KML_OK;
}

kml_status kml_run_options_set_origin(kml_run_options* opts, int origin) {
  KML_REQUIRE(opts);
  opts->cfg.origin = origin != 0;
  return KML_OK;
}

kml_status kml_run_verify(const kml_run_options* opts, kml_result** out) { return run(kmlab::run_verify, opts, out); }
kml_status kml_run_integrate(const kml_run_options* opts, kml_result** out) {
  return run(kmlab::run_integrate, opts, out);
}
kml_status kml_run_hierarchy(const kml_run_options* opts, kml_result** out) {
  return run(kmlab::run_hierarchy, opts, out);
}
kml_status kml_run_spectrum(const kml_run_options* opts, kml_result** out) {
  return run(kmlab::run_spectrum, opts, out);
}

const char* kml_result_text(const kml_result* result) { return result ? result->text.c_str() : ""; }
const char* kml_result_summary(const kml_result* result) { return result ? result->summary.c_str() : ""; }
int kml_result_passed(const kml_result* result) { return result && result->passed ? 1 : 0; }
void kml_result_destroy(kml_result* result) { delete result; }

}  // extern "C"
