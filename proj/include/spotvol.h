/* spotvol: spot volatility estimation from noisy, jump-contaminated
 * high-frequency prices.  C interface around the C++ core: opaque handles,
 * integer status codes, per-thread error messages.
 */
#ifndef SPOTVOL_H
#define SPOTVOL_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sv_status {
  SV_OK = 0,
  SV_ERR_USAGE = 1,   /* invalid parameters or configuration */
  SV_ERR_DATA = 2,    /* malformed or inconsistent input data */
  SV_ERR_NUMERIC = 3, /* numerical failure at evaluation time */
} sv_status;

/* Message for the most recent failure on this thread. */
const char* sv_last_error(void);
const char* sv_version(void);

/* ---- observation series ------------------------------------------------ */

typedef struct sv_series sv_series;

/* count = n+1 equidistant values on [0, horizon]. */
sv_status sv_series_from_values(const double* values, size_t count,
                                double horizon, sv_series** out);
/* Reads "time,value" (or a simulated-path CSV, taking the noisy column). */
sv_status sv_series_read_csv(const char* path, sv_series** out);
sv_status sv_series_write_csv(const sv_series* series, const char* path);
size_t sv_series_count(const sv_series* series);
double sv_series_horizon(const sv_series* series);
/* Copies all values; buffer_len must be at least sv_series_count. */
sv_status sv_series_values(const sv_series* series, double* buffer,
                           size_t buffer_len);
void sv_series_free(sv_series* series);

/* ---- estimation -------------------------------------------------------- */

typedef struct sv_estimator_config sv_estimator_config;

/* JSON text, {"estimator": {...}} or the bare section; n resolves bandwidth
 * rules like "n^-0.26".  Pass "{}" for defaults. */
sv_status sv_estimator_config_from_json(const char* json_text, size_t n,
                                        sv_estimator_config** out);
void sv_estimator_config_free(sv_estimator_config* config);

typedef struct sv_estimate {
  double tau;
  double sigma2_hat;
  double noise_correction;
  double ecf_value;
  double u_used;
  int clamped;
  double debias_correction;
} sv_estimate;

sv_status sv_estimate_at(const sv_series* series,
                         const sv_estimator_config* config, double tau,
                         sv_estimate* out);

/* ---- simulation -------------------------------------------------------- */

typedef struct sv_sim_config sv_sim_config;

sv_status sv_sim_config_from_json(const char* json_text, sv_sim_config** out);
void sv_sim_config_free(sv_sim_config* config);

/* Writes the path CSV ("time,clean,noisy,spot_var") and/or the observation
 * CSV ("time,value", noisy values); either path may be NULL. */
sv_status sv_simulate_to_csv(const sv_sim_config* config, uint64_t seed,
                             const char* path_csv, const char* obs_csv);
sv_status sv_simulate_series(const sv_sim_config* config, uint64_t seed,
                             sv_series** out);

/* ---- Monte Carlo runners ----------------------------------------------- */

/* grid_json_text: {"n":..., "defaults":{...}, "cells":[{...}...]}.
 * reps <= 0 takes the grid's "reps" field.  studentized_dir, when non-NULL,
 * receives one CSV of per-replication studentized statistics per cell. */
sv_status sv_run_bench(const char* grid_json_text, long reps, uint64_t seed,
                       int threads, const char* out_csv,
                       const char* studentized_dir);
/* Same grid schema; one output row per cell and estimator (ll, fw1, fw2). */
sv_status sv_run_compare(const char* grid_json_text, long reps, uint64_t seed,
                         int threads, const char* out_csv);

/* ---- tick resampling + volatility curve -------------------------------- */

typedef struct sv_curve_options {
  int64_t interval_ns;       /* resampling interval, e.g. 1000000000 */
  int64_t session_open_ns;   /* offset from midnight */
  int64_t session_close_ns;  /* offset from midnight */
  int64_t utc_offset_s;      /* shifts tick timestamps before day split */
  int log_transform;         /* nonzero: estimate on log prices */
  double horizon;            /* time units for the concatenated grid */
} sv_curve_options;

/* Previous-tick resampling of the tick CSV onto per-day session grids, then
 * a spot-variance estimate at every tau; writes the curve CSV.
 * config_json may be NULL for the one-sided-kernel curve defaults. */
sv_status sv_run_curve(const char* ticks_csv, const char* config_json,
                       const sv_curve_options* options, const double* taus,
                       size_t tau_count, const char* out_csv);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SPOTVOL_H */
