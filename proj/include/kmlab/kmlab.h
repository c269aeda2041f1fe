/* kmlab C API: KM lattice objects, verification runs and integrations.
 *
 * All matrices are written row-major into caller-owned buffers. Phase-space
 * points are flat arrays (q_1..q_N, p_1..p_N) with N = 2n-1. Every function
 * returning kml_status leaves a message in kml_last_error() on failure.
 */
#ifndef KMLAB_H
#define KMLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(KMLAB_BUILDING)
#define KML_API __attribute__((visibility("default")))
#else
#define KML_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kml_status {
  KML_OK = 0,
  KML_ERR_INVALID_DIMENSION = 1,
  KML_ERR_DOMAIN = 2,
  KML_ERR_DIMENSION_MISMATCH = 3,
  KML_ERR_INVALID_ARGUMENT = 4,
  KML_ERR_INTEGRATION_FAILURE = 5,
  KML_ERR_NULL_POINTER = 6,
  KML_ERR_INTERNAL = 7
} kml_status;

typedef enum kml_space { KML_SPACE_U = 0, KML_SPACE_PHASE = 1 } kml_space;
typedef enum kml_format { KML_FORMAT_JSON = 0, KML_FORMAT_CSV = 1 } kml_format;

/* Poisson tensors addressable by kml_jacobi_residual. */
typedef enum kml_tensor {
  KML_TENSOR_PI2 = 0,
  KML_TENSOR_PI3 = 1,
  KML_TENSOR_J2 = 2,
  KML_TENSOR_J3 = 3,
  KML_TENSOR_J3_CLOSED = 4,
  KML_TENSOR_J4 = 5
} kml_tensor;

typedef struct kml_context kml_context;
typedef struct kml_run_options kml_run_options;
typedef struct kml_result kml_result;

KML_API const char* kml_version(void);
KML_API const char* kml_last_error(void);
KML_API const char* kml_status_string(kml_status status);

/* Context fixes the lattice size n (N = 2n-1 sites, M = 2N phase dims). */
KML_API kml_status kml_context_create(int n, kml_context** out);
KML_API void kml_context_destroy(kml_context* ctx);
KML_API int kml_context_n(const kml_context* ctx);
KML_API int kml_context_sites(const kml_context* ctx);
KML_API int kml_context_phase_dim(const kml_context* ctx);
KML_API int kml_context_lax_size(const kml_context* ctx);

/* count points from the seeded stream; out holds count * N (u) or count * M. */
KML_API kml_status kml_sample(const kml_context* ctx, uint64_t seed, int count, kml_space space, double* out);

/* u-space */
KML_API kml_status kml_km_rhs(const kml_context* ctx, const double* u, double* out);
KML_API kml_status kml_lax_l(const kml_context* ctx, const double* u, double* out);
KML_API kml_status kml_lax_b(const kml_context* ctx, const double* u, double* out);
KML_API kml_status kml_lax_residual(const kml_context* ctx, const double* u, double* out);
KML_API kml_status kml_invariants(const kml_context* ctx, const double* u, int kmax, double* out);
KML_API kml_status kml_spectrum(const kml_context* ctx, const double* u, double* out);
KML_API kml_status kml_pi2(const kml_context* ctx, const double* u, double* out);
KML_API kml_status kml_pi3(const kml_context* ctx, const double* u, double* out);
KML_API kml_status kml_master_y1(const kml_context* ctx, const double* u, double* out);
/* a has n-1 entries, b has n. */
KML_API kml_status kml_henon_map(const kml_context* ctx, const double* u, double* a, double* b);
KML_API kml_status kml_conjugacy_residual(const kml_context* ctx, const double* u, double* out);

/* phase space */
KML_API kml_status kml_volterra_map(const kml_context* ctx, const double* x, double* u_out);
KML_API kml_status kml_j2(const kml_context* ctx, double* out);
KML_API kml_status kml_j3(const kml_context* ctx, const double* x, double* out);
KML_API kml_status kml_j3_closed(const kml_context* ctx, const double* x, double* out);
KML_API kml_status kml_tensor_j(const kml_context* ctx, int k, const double* x, double* out);
KML_API kml_status kml_recursion(const kml_context* ctx, const double* x, double* out);
KML_API kml_status kml_flow(const kml_context* ctx, int k, const double* x, double* out);
KML_API kml_status kml_master_x(const kml_context* ctx, int k, const double* x, double* out);
KML_API kml_status kml_h(const kml_context* ctx, int k, const double* x, double* out);

/* Residuals. use_fd != 0 replaces analytic partials by central differences. */
KML_API kml_status kml_jacobi_residual(const kml_context* ctx, kml_tensor tensor, const double* point, int use_fd,
                                       double* out);
/* k = 2 compares J2 with pi2, k = 3 compares J3 with pi3. */
KML_API kml_status kml_pushforward_residual(const kml_context* ctx, int k, const double* x, double* out);

/* Run options; defaults n=2, seed=42, points=20, t1=10, dt=1e-3, kmax=4. */
KML_API kml_status kml_run_options_create(kml_run_options** out);
KML_API void kml_run_options_destroy(kml_run_options* opts);
KML_API kml_status kml_run_options_set_n(kml_run_options* opts, int n);
KML_API kml_status kml_run_options_set_seed(kml_run_options* opts, uint64_t seed);
KML_API kml_status kml_run_options_set_points(kml_run_options* opts, int points);
KML_API kml_status kml_run_options_set_tolerance(kml_run_options* opts, const char* name, double value);
KML_API kml_status kml_run_options_add_suite(kml_run_options* opts, const char* name);
KML_API kml_status kml_run_options_set_t1(kml_run_options* opts, double t1);
KML_API kml_status kml_run_options_set_dt(kml_run_options* opts, double dt);
KML_API kml_status kml_run_options_set_kmax(kml_run_options* opts, int kmax);
KML_API kml_status kml_run_options_set_space(kml_run_options* opts, kml_space space);
KML_API kml_status kml_run_options_set_format(kml_run_options* opts, kml_format format);
KML_API kml_status kml_run_options_set_init_u(kml_run_options* opts, const double* u, size_t len);
KML_API kml_status kml_run_options_set_init_phase(kml_run_options* opts, const double* q, const double* p, size_t len);
KML_API kml_status kml_run_options_set_origin(kml_run_options* opts, int origin);

/* A run that executes but fails its checks still returns KML_OK; inspect
 * kml_result_passed. Invalid options return an error and no result. */
KML_API kml_status kml_run_verify(const kml_run_options* opts, kml_result** out);
KML_API kml_status kml_run_integrate(const kml_run_options* opts, kml_result** out);
KML_API kml_status kml_run_hierarchy(const kml_run_options* opts, kml_result** out);
KML_API kml_status kml_run_spectrum(const kml_run_options* opts, kml_result** out);

KML_API const char* kml_result_text(const kml_result* result);
KML_API const char* kml_result_summary(const kml_result* result);
KML_API int kml_result_passed(const kml_result* result);
KML_API void kml_result_destroy(kml_result* result);

#ifdef __cplusplus
}
#endif

#endif
