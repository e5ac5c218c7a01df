/* Copyright 2026 The upe authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the upe estimation library.
 *
 * The library estimates unconditional effects of location-scale and
 * simultaneous policy shifts on outcome quantiles, with influence-function
 * standard errors, a t-test for a zero scale effect, closed-form and
 * simulation oracles for the normal linear model, and a Monte Carlo harness.
 *
 * All functions return UPE_OK (0) on success or a coarse error class;
 * upe_last_error() returns a thread-local description of the most recent
 * failure. Objects returned through out-parameters are owned by the caller
 * and released with the matching *_free function.
 */

#ifndef UPE_UPE_H_
#define UPE_UPE_H_

#include <stdint.h>

#if defined(_WIN32)
#define UPE_API __declspec(dllexport)
#else
#define UPE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum upe_status {
  UPE_OK = 0,
  UPE_ERROR_CONFIG = 2,
  UPE_ERROR_DATA = 3,
  UPE_ERROR_NUMERIC = 4
} upe_status;

/* Thread-local message for the most recent failing call. */
UPE_API const char* upe_last_error(void);

UPE_API const char* upe_version(void);

/* ---------------------------------------------------------------- dataset */

typedef struct upe_dataset upe_dataset;

/* Column lists are comma separated names; `w_cols` may be NULL or empty.
 * Rows containing missing or non-finite fields are dropped and counted. */
UPE_API upe_status upe_dataset_read_csv(const char* path, const char* y_col,
                                        const char* x_cols, const char* w_cols,
                                        upe_dataset** out);

/* Column-major data: x holds n_rows*n_x values, w holds n_rows*n_w. */
UPE_API upe_status upe_dataset_create(const double* y, const double* x,
                                      int n_x, const double* w, int n_w,
                                      int n_rows, upe_dataset** out);

UPE_API int upe_dataset_rows(const upe_dataset* data);
UPE_API int upe_dataset_dropped_rows(const upe_dataset* data);
/* Load-report column ranges (outcome first, then targets, then controls). */
UPE_API int upe_dataset_ncols(const upe_dataset* data);
UPE_API upe_status upe_dataset_column_info(const upe_dataset* data, int index,
                                           char name[64], double* min_value,
                                           double* max_value);
UPE_API void upe_dataset_free(upe_dataset* data);

/* ------------------------------------------------------------- estimation */

/* Location-scale mode uses (ldot0, sdot0, mu); setting `simultaneous`
 * nonzero switches to joint location shifts of two targets with derivatives
 * (ldot1, ldot2). */
typedef struct upe_policy {
  double ldot0;
  double sdot0;
  double mu;
  int simultaneous;
  double ldot1;
  double ldot2;
} upe_policy;

#define UPE_LINK_PROBIT 1
#define UPE_LINK_LOGIT 2

typedef struct upe_estimate_config {
  const double* taus;
  int n_taus;
  int links;        /* bitmask of UPE_LINK_* */
  int quadratic_x;  /* 0: linear basis in each target, 1: (x, x^2) */
  upe_policy policy;
  double bandwidth; /* <= 0 selects the Silverman rule */
  int log_outcome;
  double conf_level; /* e.g. 0.95 */
  int psi_strict;    /* strict indicator 1{y < q} inside psi (replication) */
} upe_estimate_config;

typedef struct upe_report upe_report;

UPE_API upe_status upe_estimate_run(const upe_dataset* data,
                                    const upe_estimate_config* config,
                                    upe_report** out);

typedef struct upe_effect_row {
  double tau;
  char link[8];
  char effect[16]; /* location | scale | total | location_1 | location_2 |
                      compensated */
  double estimate;
  double se;
  double ci_lo;
  double ci_hi;
  int has_elasticity;
  double elasticity;
  double mu;
  double q_hat;
  double f_hat;
} upe_effect_row;

typedef struct upe_ttest_row {
  double tau;
  char link[8];
  double gamma_hat;
  double v_hat;
  double t_stat;
  double p_value;
} upe_ttest_row;

UPE_API int upe_report_nrows(const upe_report* report);
UPE_API upe_status upe_report_row(const upe_report* report, int index,
                                  upe_effect_row* out);
UPE_API int upe_report_nttests(const upe_report* report);
UPE_API upe_status upe_report_ttest(const upe_report* report, int index,
                                    upe_ttest_row* out);
/* Either path may be NULL to skip that format. */
UPE_API upe_status upe_report_write(const upe_report* report,
                                    const char* csv_path,
                                    const char* ttest_csv_path,
                                    const char* json_path);
UPE_API void upe_report_free(upe_report* report);

/* ------------------------------------------------------------ monte carlo */

typedef struct upe_dgp {
  double lambda;
  double gamma;
  double mu_x;
  double sigma_x;
  double sigma_u;
} upe_dgp;

typedef enum upe_mc_mode {
  UPE_MC_BIAS = 0,
  UPE_MC_COVERAGE = 1,
  UPE_MC_POWER = 2,
  UPE_MC_NORMALITY = 3
} upe_mc_mode;

typedef struct upe_mc_config {
  upe_dgp dgp;
  int n;
  int reps;
  const double* taus;
  int n_taus;
  int links; /* bitmask */
  upe_policy policy;
  uint64_t seed;
  const double* gamma_grid; /* coverage/power modes */
  int n_gamma;
  int workers; /* 0: hardware concurrency */
  double conf_level;
} upe_mc_config;

typedef struct upe_mc_result upe_mc_result;

typedef struct upe_mc_cell {
  char estimator[16];
  char link[8];
  double tau;
  int n;
  double gamma;
  char statistic[24];
  double value;
  double mc_se;
} upe_mc_cell;

UPE_API upe_status upe_mc_run(upe_mc_mode mode, const upe_mc_config* config,
                              upe_mc_result** out);
UPE_API int upe_mc_ncells(const upe_mc_result* result);
UPE_API upe_status upe_mc_cell_at(const upe_mc_result* result, int index,
                                  upe_mc_cell* out);
/* Writes <mode>_table.csv plus plot-ready series files into `dir`. */
UPE_API upe_status upe_mc_write(const upe_mc_result* result, const char* dir);
UPE_API void upe_mc_result_free(upe_mc_result* result);

/* ----------------------------------------------------------------- oracle */

UPE_API upe_status upe_oracle_closed_form(const upe_dgp* dgp,
                                          const upe_policy* policy, double tau,
                                          double* pi_l, double* pi_s,
                                          int* has_elasticity,
                                          double* elasticity);

UPE_API upe_status upe_oracle_brute_force(const upe_dgp* dgp,
                                          const upe_policy* policy, double tau,
                                          double delta, int64_t n_sim,
                                          uint64_t seed, int workers,
                                          double* pi_l, double* pi_s);

/* Replicated brute-force vs closed-form comparison; writes one CSV row per
 * (tau, channel) and reports whether every row passed its tolerance. */
UPE_API upe_status upe_oracle_compare(const upe_dgp* dgp,
                                      const upe_policy* policy,
                                      const double* taus, int n_taus,
                                      double delta, int64_t n_sim,
                                      int replicates, uint64_t seed,
                                      int workers, const char* csv_path,
                                      int* all_pass);

UPE_API upe_status upe_stein_check(const upe_dgp* dgp, double tau, int n_nodes,
                                   double* residual);

/* ------------------------------------------------------------- synth data */

/* profile: "wage1-like" or "mc". */
UPE_API upe_status upe_synth_data(const char* profile, int n, uint64_t seed,
                                  const char* path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* UPE_UPE_H_ */
