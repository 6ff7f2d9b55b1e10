/*
 * (C) Copyright 2026 mixnorm developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#ifndef MIXNORM_H
#define MIXNORM_H

/*
 * C interface to libmixnorm.
 *
 * Every function returns a mixnorm_status; on failure the message for the
 * calling thread is available from mixnorm_last_error() until the next
 * failing call on that thread. Objects are opaque handles owned by the
 * caller and released with the matching *_free function. Output handles are
 * only written on success.
 */

#include <stddef.h>

#if defined(_WIN32)
#define MIXNORM_API __declspec(dllexport)
#else
#define MIXNORM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mixnorm_status {
  MIXNORM_OK = 0,
  MIXNORM_E_INVALID_ARGUMENT = 1,
  MIXNORM_E_INVALID_SECTION = 2,
  MIXNORM_E_SIZE_LIMIT = 3,
  MIXNORM_E_DEGENERATE = 4,
  MIXNORM_E_BAD_MAGIC = 5,
  MIXNORM_E_BAD_VERSION = 6,
  MIXNORM_E_TRUNCATED = 7,
  MIXNORM_E_NON_FINITE = 8,
  MIXNORM_E_UNSUPPORTED_FORMAT = 9,
  MIXNORM_E_IO = 10,
  MIXNORM_E_CONFIG = 11,
  MIXNORM_E_INTERNAL = 12
} mixnorm_status;

typedef struct mixnorm_section mixnorm_section;
typedef struct mixnorm_sweep mixnorm_sweep;

enum { MIXNORM_INTERP_SINC8 = 0, MIXNORM_INTERP_LINEAR = 1 };

typedef struct mixnorm_migration_params {
  double v; /* m/s */
  size_t pad_t;
  size_t pad_x;
  int interp; /* MIXNORM_INTERP_* */
} mixnorm_migration_params;

typedef struct mixnorm_sweep_spec {
  double v_min;
  double v_max;
  double v_step;
  double tau;
  int has_window; /* score only [it0, it1) x [ix0, ix1) when non-zero */
  size_t it0, it1, ix0, ix1;
  mixnorm_migration_params migration;
} mixnorm_sweep_spec;

typedef struct mixnorm_despike_params {
  size_t window;
  double k_mad;
  double tv_lambda_fraction;
} mixnorm_despike_params;

typedef struct mixnorm_diffusion_params {
  size_t patch;
  double epsilon;
  size_t t;
  size_t r;
  size_t max_points;
  size_t knn;
} mixnorm_diffusion_params;

MIXNORM_API const char* mixnorm_version(void);
MIXNORM_API const char* mixnorm_last_error(void);
MIXNORM_API const char* mixnorm_status_name(mixnorm_status status);

/* Worker threads used by every parallel stage; results do not depend on it. */
MIXNORM_API mixnorm_status mixnorm_set_threads(unsigned n);

MIXNORM_API mixnorm_migration_params mixnorm_migration_defaults(void);
MIXNORM_API mixnorm_sweep_spec mixnorm_sweep_defaults(void);
MIXNORM_API mixnorm_despike_params mixnorm_despike_defaults(void);
MIXNORM_API mixnorm_diffusion_params mixnorm_diffusion_defaults(void);

/* Sections. Samples are trace-major: samples[ix * nt + it]. A NULL
 * `samples` gives a zero section. */
MIXNORM_API mixnorm_status mixnorm_section_create(size_t nt, size_t nx, double dt, double dx,
                                                  double t0, const double* samples,
                                                  mixnorm_section** out);
MIXNORM_API void mixnorm_section_free(mixnorm_section* section);
MIXNORM_API mixnorm_status mixnorm_section_dims(const mixnorm_section* section, size_t* nt,
                                                size_t* nx, double* dt, double* dx, double* t0);
MIXNORM_API mixnorm_status mixnorm_section_samples(const mixnorm_section* section, double* out,
                                                   size_t len);

MIXNORM_API mixnorm_status mixnorm_section_read(const char* path, mixnorm_section** out);
MIXNORM_API mixnorm_status mixnorm_section_write(const mixnorm_section* section, const char* path);
MIXNORM_API mixnorm_status mixnorm_section_export_csv(const mixnorm_section* section,
                                                      const char* path);
/* Warnings are joined with '\n' into `warnings` (truncated to warnings_len,
 * always NUL-terminated when warnings_len > 0); it may be NULL. */
MIXNORM_API mixnorm_status mixnorm_import_segy(const char* path, mixnorm_section** out,
                                               char* warnings, size_t warnings_len);

/* Synthetic diffraction sections. */
MIXNORM_API mixnorm_status mixnorm_synth_demo(mixnorm_section** out);
MIXNORM_API mixnorm_status mixnorm_synth(const double* x, const double* z, const double* amp,
                                         size_t n_diffractors, double v_true, double peak_freq,
                                         int geometric_spreading, size_t nt, size_t nx, double dt,
                                         double dx, mixnorm_section** out);

/* L1 editing. */
MIXNORM_API mixnorm_status mixnorm_tv_denoise(const double* in, double* out, size_t n,
                                              double lambda);
MIXNORM_API mixnorm_status mixnorm_despike(const mixnorm_section* in,
                                           const mixnorm_despike_params* params,
                                           mixnorm_section** out, size_t* flagged_samples);

/* Migration. */
MIXNORM_API mixnorm_status mixnorm_migrate(const mixnorm_section* in,
                                           const mixnorm_migration_params* params,
                                           mixnorm_section** out);
/* Fills out[0..n_panels) with A^k u at v_eff = base_v * sqrt(k). */
MIXNORM_API mixnorm_status mixnorm_panels(const mixnorm_section* in, double base_v,
                                          size_t n_panels,
                                          const mixnorm_migration_params* params,
                                          mixnorm_section** out);
MIXNORM_API mixnorm_status mixnorm_cascade_check(const mixnorm_section* in, double v1, double v2,
                                                 const mixnorm_migration_params* params,
                                                 double* relative_error);

/* Topology. */
MIXNORM_API mixnorm_status mixnorm_betti(const mixnorm_section* in, double tau, size_t* b0,
                                         size_t* b1, size_t* active_pixels);
MIXNORM_API mixnorm_status mixnorm_velocity_sweep(const mixnorm_section* in,
                                                  const mixnorm_sweep_spec* spec,
                                                  mixnorm_sweep** out);
MIXNORM_API void mixnorm_sweep_free(mixnorm_sweep* sweep);
MIXNORM_API size_t mixnorm_sweep_count(const mixnorm_sweep* sweep);
MIXNORM_API double mixnorm_sweep_argmin(const mixnorm_sweep* sweep);
MIXNORM_API mixnorm_status mixnorm_sweep_entry(const mixnorm_sweep* sweep, size_t i, double* v,
                                               size_t* b0, size_t* b1, size_t* active_pixels,
                                               int* empty_window);
MIXNORM_API mixnorm_status mixnorm_sweep_write_csv(const mixnorm_sweep* sweep, const char* path);
MIXNORM_API mixnorm_status mixnorm_sweep_write_svg(const mixnorm_sweep* sweep, const char* path);
/* One migration at v, then b0/b1/active at each of taus[0..n). */
MIXNORM_API mixnorm_status mixnorm_threshold_sweep(const mixnorm_section* in, double v,
                                                   const double* taus, size_t n,
                                                   const mixnorm_migration_params* params,
                                                   size_t* b0, size_t* b1, size_t* active_pixels);

/* L2 diffusion denoising. */
MIXNORM_API mixnorm_status mixnorm_diffuse(const mixnorm_section* in,
                                           const mixnorm_diffusion_params* params,
                                           mixnorm_section** out);

/* Full pipeline. `config_json` may be NULL for defaults. v_star is NaN
 * when the sweep is disabled; final_out may be NULL. */
MIXNORM_API mixnorm_status mixnorm_run_pipeline(const char* config_json,
                                                const mixnorm_section* in, const char* out_dir,
                                                double* v_star, mixnorm_section** final_out);

#ifdef __cplusplus
}
#endif

#endif /* MIXNORM_H */
