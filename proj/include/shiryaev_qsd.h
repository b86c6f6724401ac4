/*
 * shiryaev-qsd C API
 *
 * Quasi-stationary distribution of the Shiryaev martingale diffusion
 * dX = dt + X dB killed at a lower boundary A > 0: principal eigenvalue
 * lambda_A, critical threshold A*, closed-form pdf/cdf/quantiles, the
 * continuum family of quasi-stationary densities, Monte-Carlo validation,
 * and an analytic cross-check suite.
 *
 * All functions return SQSD_OK on success; on failure they return a status
 * code and leave a message retrievable with sqsd_last_error() (thread-local,
 * valid until the next failing call on the same thread).  Objects returned
 * through sqsd_model* / sqsd_ensemble* handles are released with the
 * matching _free function; strings returned through char** are released
 * with sqsd_string_free.
 */

#ifndef SHIRYAEV_QSD_H
#define SHIRYAEV_QSD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SQSD_API __declspec(dllexport)
#else
#define SQSD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sqsd_status {
  SQSD_OK = 0,
  SQSD_ERR_DOMAIN = 1,       /* bad argument / precondition violation */
  SQSD_ERR_CONVERGENCE = 2,  /* iteration failed to reach its target */
  SQSD_ERR_BUDGET = 3,       /* step budget exceeded */
  SQSD_ERR_INTERNAL = 4      /* internal consistency violation */
} sqsd_status;

SQSD_API const char* sqsd_version(void);
SQSD_API const char* sqsd_last_error(void);
SQSD_API void sqsd_string_free(char* s);

/* ------------------------------------------------------------------ */
/* spectrum                                                            */
/* ------------------------------------------------------------------ */

typedef struct sqsd_spectral_point {
  double A;
  double lambda;       /* in (0, 1/8] */
  double xi;           /* sqrt(1 - 8 lambda) */
  int supercritical;   /* 1 when A >= A* (lambda = 1/8) */
} sqsd_spectral_point;

SQSD_API sqsd_status sqsd_critical_threshold(double* out);
SQSD_API sqsd_status sqsd_principal_eigenvalue(double A, sqsd_spectral_point* out);
SQSD_API sqsd_status sqsd_eigenvalue_curve(const double* A_grid, size_t n,
                                           sqsd_spectral_point* out);

/* ------------------------------------------------------------------ */
/* distribution                                                        */
/* ------------------------------------------------------------------ */

typedef struct sqsd_model sqsd_model;

SQSD_API sqsd_status sqsd_model_create_principal(double A, sqsd_model** out);
/* lambda must lie strictly inside (0, lambda_A) */
SQSD_API sqsd_status sqsd_model_create_family(double A, double lambda,
                                              sqsd_model** out);
SQSD_API void sqsd_model_free(sqsd_model* m);

SQSD_API sqsd_status sqsd_model_info(const sqsd_model* m, double* A,
                                     double* lambda, double* xi, double* C,
                                     int* is_family);
SQSD_API sqsd_status sqsd_pdf(const sqsd_model* m, double x, double* out);
SQSD_API sqsd_status sqsd_cdf(const sqsd_model* m, double x, double* out);
SQSD_API sqsd_status sqsd_quantile(const sqsd_model* m, double p, double* out);
SQSD_API sqsd_status sqsd_speed_measure(double x, double* out);

/* ------------------------------------------------------------------ */
/* special functions (debug surface)                                   */
/* ------------------------------------------------------------------ */

typedef struct sqsd_eval {
  double value;
  double est_rel_error;
  char method[16];
} sqsd_eval;

SQSD_API sqsd_status sqsd_sf_gamma(double x, double* out);
SQSD_API sqsd_status sqsd_sf_kummer_m(double alpha, double beta, double z,
                                      sqsd_eval* out);
SQSD_API sqsd_status sqsd_sf_tricomi_u(double alpha, double beta, double z,
                                       sqsd_eval* out);
SQSD_API sqsd_status sqsd_sf_whittaker_m(double a, double b, double z,
                                         sqsd_eval* out);
SQSD_API sqsd_status sqsd_sf_whittaker_w(double a, double b, double z,
                                         sqsd_eval* out);

/* ------------------------------------------------------------------ */
/* simulation                                                          */
/* ------------------------------------------------------------------ */

typedef struct sqsd_sim_config {
  double A;            /* kill boundary; 0 disables killing */
  double x0;           /* headstart, > A */
  double dt;
  double horizon;
  uint64_t n_paths;
  uint64_t seed;
  unsigned n_bins;     /* survival-curve resolution; 0 -> 256 */
  unsigned n_threads;  /* 0 -> automatic */
} sqsd_sim_config;

typedef struct sqsd_ensemble sqsd_ensemble;

SQSD_API sqsd_status sqsd_simulate(const sqsd_sim_config* cfg, sqsd_ensemble** out);
SQSD_API void sqsd_ensemble_free(sqsd_ensemble* e);

SQSD_API size_t sqsd_ensemble_survivor_count(const sqsd_ensemble* e);
SQSD_API uint64_t sqsd_ensemble_killed_count(const sqsd_ensemble* e);
/* copies up to buf_len survivor values (ascending); returns count copied */
SQSD_API size_t sqsd_ensemble_survivors(const sqsd_ensemble* e, double* buf,
                                        size_t buf_len);
SQSD_API size_t sqsd_ensemble_bin_count(const sqsd_ensemble* e);
SQSD_API sqsd_status sqsd_ensemble_survival_curve(const sqsd_ensemble* e,
                                                  double* times,
                                                  uint64_t* alive_counts,
                                                  size_t buf_len);
SQSD_API sqsd_status sqsd_ensemble_empirical_cdf(const sqsd_ensemble* e,
                                                 double x, double* out);
SQSD_API sqsd_status sqsd_ks_distance(const sqsd_ensemble* e,
                                      const sqsd_model* m, double* out);
SQSD_API sqsd_status sqsd_estimate_kill_rate(const sqsd_ensemble* e, double* out);
/* JSON summary: config echo, seed, survival curve, survivor histogram */
SQSD_API sqsd_status sqsd_ensemble_to_json(const sqsd_ensemble* e, char** out_json);

/* ------------------------------------------------------------------ */
/* validation                                                          */
/* ------------------------------------------------------------------ */

/* suite: "analytic", "mc", or "all".  overall_pass is 1 iff every check
 * passed; the JSON report lists each check's residual and tolerance. */
SQSD_API sqsd_status sqsd_run_validation(double A, const char* suite,
                                         char** out_json, int* overall_pass);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SHIRYAEV_QSD_H */
