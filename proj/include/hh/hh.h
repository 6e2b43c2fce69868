#ifndef HH_H
#define HH_H

/* C interface to the Hardy-Henon toolkit.
 *
 * Every operation returns an hh_status. On failure the message is kept on
 * the context (hh_last_error) and no output handle is produced. Documents
 * carry a JSON payload plus the list of artifact files written; artifacts
 * are only written when the operation succeeds. */

#include <stddef.h>

#if defined(_WIN32)
#define HH_API __declspec(dllexport)
#else
#define HH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hh_status {
  HH_OK = 0,
  HH_INVALID_ARGUMENT,
  HH_INVALID_PARAMS,
  HH_DEGENERATE_EXPONENT,
  HH_NOT_POSITIVE,
  HH_NEGATIVE_ALPHA,
  HH_WRONG_DIMENSION,
  HH_UNDEFINED_POWER,
  HH_POTENTIAL_SINGULARITY,
  HH_NON_POSITIVE_VALUE,
  HH_NO_CONVERGENCE,
  HH_STEP_SIZE_UNDERFLOW,
  HH_NON_FINITE_FIELD,
  HH_STEP_LIMIT_EXCEEDED,
  HH_PRECONDITION_UNMET,
  HH_INCONCLUSIVE,
  HH_LOST_POSITIVITY,
  HH_IO,
  HH_INTERNAL
} hh_status;

typedef enum hh_domain { HH_FULL_SPACE = 0, HH_HALF_LINE = 1 } hh_domain;

typedef struct hh_params {
  int n;
  double p;
  double sigma;
  hh_domain domain;
} hh_params;

typedef struct hh_context hh_context;
typedef struct hh_document hh_document;
typedef struct hh_trajectory hh_trajectory;

/* Context: integration tolerance (default 1e-10) and output style. */
HH_API hh_context* hh_context_create(void);
HH_API void hh_context_destroy(hh_context* ctx);
HH_API hh_status hh_context_set_tolerance(hh_context* ctx, double tol);
HH_API double hh_context_tolerance(const hh_context* ctx);
/* Indented JSON when nonzero. */
HH_API void hh_context_set_pretty(hh_context* ctx, int pretty);
HH_API const char* hh_last_error(const hh_context* ctx);
HH_API const char* hh_status_string(hh_status status);

HH_API const char* hh_document_json(const hh_document* doc);
HH_API size_t hh_document_artifact_count(const hh_document* doc);
HH_API const char* hh_document_artifact(const hh_document* doc, size_t index);
/* 0 when the document records a finding (failed check, red alert, broken
 * invariant), 1 otherwise. */
HH_API int hh_document_ok(const hh_document* doc);
HH_API void hh_document_destroy(hh_document* doc);

/* Operations. `out_dir` may be NULL to skip artifacts; the directory is
 * created when missing. */
HH_API hh_status hh_classify(hh_context* ctx, const hh_params* params, hh_document** out);
HH_API hh_status hh_critical_exponent(hh_context* ctx, int n, double sigma, double* out);
/* atlas.csv and atlas.json */
HH_API hh_status hh_atlas_export(hh_context* ctx, const hh_params* grid, size_t count, const char* out_dir,
                                 hh_document** out);
/* Image parameters, verdicts on both sides, and the transformed power law
 * with its residual when one exists. Half-line, n = 1. */
HH_API hh_status hh_kelvin(hh_context* ctx, double p, double sigma, hh_document** out);
/* family.csv and manifest.json */
HH_API hh_status hh_family(hh_context* ctx, double p, double sigma, double w0, double x_max, const char* out_dir,
                           hh_document** out);
/* below_ua.csv */
HH_API hh_status hh_below_ua(hh_context* ctx, double p, double sigma, double w0, double x_max, const char* out_dir,
                             hh_document** out);
/* a = (2 + sigma) / (1 - p) for a valid power law. */
HH_API hh_status hh_lienard_a(hh_context* ctx, double p, double sigma, double* a);
/* orbit.csv (z,V,Vdot,E) */
HH_API hh_status hh_orbit(hh_context* ctx, double a, double p, double V0, double Vdot0, double z0, double z1,
                          const char* out_dir, hh_document** out);
/* seed_NN.csv per seed and manifest.json */
HH_API hh_status hh_portrait(hh_context* ctx, double a, double p, double z_span, const char* out_dir,
                             hh_document** out);
/* shot.csv (r,u,du) */
HH_API hh_status hh_shoot(hh_context* ctx, const hh_params* params, double u0, double slope0, double r_max,
                          const char* out_dir, hh_document** out);
/* scan.json and red_alert_NN.csv per surviving shot */
HH_API hh_status hh_scan(hh_context* ctx, const hh_params* params, const double* u0s, size_t u0_count,
                         const double* slopes, size_t slope_count, double r_max, const char* out_dir,
                         hh_document** out);
/* suite: atlas, closedforms, dynamics, family, radial or all. */
HH_API hh_status hh_verify(hh_context* ctx, const char* suite, double tolerance_scale, hh_document** out);

/* Raw orbit of the autonomous system. */
HH_API hh_status hh_lienard_orbit(hh_context* ctx, double a, double p, double V0, double Vdot0, double z0, double z1,
                                  hh_trajectory** out);
HH_API size_t hh_trajectory_size(const hh_trajectory* traj);
HH_API hh_status hh_trajectory_sample(const hh_trajectory* traj, size_t index, double* t, double* y, double* dy);
/* Dense-output evaluation inside the integrated span. */
HH_API hh_status hh_trajectory_eval(const hh_trajectory* traj, double t, double* y, double* dy);
/* Termination event as a JSON object. */
HH_API const char* hh_trajectory_termination(const hh_trajectory* traj);
HH_API hh_status hh_trajectory_write_csv(const hh_trajectory* traj, const char* path);
HH_API void hh_trajectory_destroy(hh_trajectory* traj);

#ifdef __cplusplus
}
#endif

#endif
