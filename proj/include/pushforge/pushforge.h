// Copyright 2026 The pushforge Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


/* C interface to the pushforge library. All functions return a pf_status;
 * on failure pf_last_error() describes the problem (per thread). Objects
 * are opaque and released with their matching *_free function. Strings and
 * arrays handed out by the library are released with pf_string_free and
 * pf_array_free. */

#ifndef PUSHFORGE_PUSHFORGE_H_
#define PUSHFORGE_PUSHFORGE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(PUSHFORGE_BUILD_SHARED)
#define PF_API __declspec(dllexport)
#else
#define PF_API __declspec(dllimport)
#endif
#else
#define PF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pf_status {
  PF_OK = 0,
  PF_ERR_INPUT = 1,   /* dimension mismatch, invalid parameter */
  PF_ERR_NUMERIC = 2, /* non-finite intermediate value */
  PF_ERR_BUDGET = 3,  /* region / matching / box budget exceeded */
  PF_ERR_FORMAT = 4,  /* malformed document or unknown version */
  PF_ERR_IO = 5,
  PF_ERR_INTERNAL = 6
} pf_status;

typedef struct pf_network pf_network;
typedef struct pf_cdf pf_cdf;

typedef struct pf_network_info {
  size_t input_dim;
  size_t output_dim;
  size_t layers;     /* affine maps */
  size_t nodes;      /* widths summed over all layers incl. input and output */
  size_t step_units;
  int relu_step;     /* 0: relu_only, 1: relu_step */
} pf_network_info;

enum { PF_SOURCE_UNIFORM = 0, PF_SOURCE_NORMAL = 1, PF_SOURCE_UNIFORM_STRATIFIED = 2 };

PF_API const char* pf_version(void);
PF_API const char* pf_last_error(void);
PF_API const char* pf_status_name(pf_status status);
PF_API void pf_string_free(char* s);
PF_API void pf_array_free(double* a);

/* --- networks ------------------------------------------------------------ */

PF_API pf_status pf_network_from_json(const char* text, pf_network** out);
PF_API pf_status pf_network_to_json(const pf_network* net, char** out);
PF_API void pf_network_free(pf_network* net);
PF_API pf_status pf_network_info_get(const pf_network* net, pf_network_info* out);
/* y must hold output_dim values. */
PF_API pf_status pf_network_eval(const pf_network* net, const double* x, size_t nx, double* y,
                                 size_t ny);
PF_API pf_status pf_compose(const pf_network* outer, const pf_network* inner, pf_network** out);
PF_API pf_status pf_parallel(const pf_network* const* nets, size_t count, pf_network** out);
PF_API pf_status pf_replace_steps(const pf_network* net, double delta, pf_network** out);
/* Test hook: adds delta to the first weight of the first layer. */
PF_API pf_status pf_perturb_first_weight(const pf_network* net, double delta, pf_network** out);

/* --- builders ------------------------------------------------------------
 * Builders taking a char** cert fill it with a JSON certificate
 * {target_eps, claimed_sup_error, domain, zeta, details}; pass NULL to skip. */

PF_API pf_status pf_build_tent(int k, pf_network** out);
/* plan receives {n, d, N, L, outputs_per_input, run_length, chain_width,
 * chain_nodes, k}. */
PF_API pf_status pf_build_space_filling(int n, int d, int N, int L, pf_network** out, char** plan);
PF_API pf_status pf_build_clamp(double lo, double hi, pf_network** out);
PF_API pf_status pf_build_multiplier(double M, double eps, pf_network** out);
PF_API pf_status pf_build_power_tower(int n, double M, double eps, pf_network** out);
PF_API pf_status pf_build_sum_of_uniforms(int n, pf_network** out);
PF_API pf_status pf_build_normal_cdf(double eps, pf_network** out, char** cert);
PF_API pf_status pf_build_inverter(const pf_network* f, double a, double b, int t,
                                   double lipschitz_inv, double f_eps, pf_network** out,
                                   char** cert);
PF_API pf_status pf_build_inverse_normal_cdf(double eps, pf_network** out, char** cert);
PF_API pf_status pf_build_uniform_to_normal(double eps, pf_network** out, char** cert);
/* kind: "exp", "ln", "cos", "sin" or "pow" (alpha used for pow only). */
PF_API pf_status pf_build_analytic(const char* kind, double a, double b, double eps, double alpha,
                                   pf_network** out, char** cert);
PF_API pf_status pf_build_box_muller(double eps, pf_network** out, char** cert);

/* --- regions ------------------------------------------------------------- */

/* lo/hi: domain box of net's input dimension. out receives a JSON array of
 * {pattern, interior_point, inradius, matrix, offset, constraints}. */
PF_API pf_status pf_enumerate_regions(const pf_network* net, const double* lo, const double* hi,
                                      size_t dim, size_t* count, char** out);
PF_API pf_status pf_breakpoints_1d(const pf_network* net, double a, double b, double** out,
                                   size_t* count);

/* --- distributions and transport ----------------------------------------- */

PF_API pf_status pf_pushforward_cdf(const pf_network* net, double a, double b, pf_cdf** out);
PF_API pf_status pf_empirical_cdf(const double* samples, size_t count, pf_cdf** out);
PF_API pf_status pf_cdf_from_points(const double* x, const double* v, size_t count, pf_cdf** out);
PF_API void pf_cdf_free(pf_cdf* cdf);
/* Borrowed views valid until pf_cdf_free. */
PF_API pf_status pf_cdf_points(const pf_cdf* cdf, const double** x, const double** v,
                               size_t* count);
PF_API pf_status pf_cdf_eval(const pf_cdf* cdf, double t, double* out);
/* CSV with header "breakpoint,value" and a leading "# comment" line when
 * comment is non-empty. */
PF_API pf_status pf_cdf_to_csv(const pf_cdf* cdf, const char* comment, char** out);
PF_API pf_status pf_cdf_from_csv(const char* text, pf_cdf** out);

PF_API pf_status pf_wasserstein_1d(const pf_cdf* f, const pf_cdf* g, double* out);
PF_API pf_status pf_wasserstein_1d_normal(const pf_cdf* f, double* out);
/* Exact EMD between two equal-size uniform-weight point sets (row-major,
 * count x dim each). */
PF_API pf_status pf_empirical_wasserstein(const double* a, const double* b, size_t count,
                                          size_t dim, double* out);
/* Draws `count` source points (PF_SOURCE_*) with the given seed and stream,
 * pushes them through net and returns count x output_dim values. */
PF_API pf_status pf_sample_pushforward(const pf_network* net, int source, uint64_t seed,
                                       uint64_t stream, size_t count, unsigned jobs,
                                       double** out);
/* Sample sets as CSV with header dim0,...,dimk. */
PF_API pf_status pf_samples_to_csv(const double* points, size_t count, size_t dim,
                                   const char* comment, char** out);
PF_API pf_status pf_samples_from_csv(const char* text, double** points, size_t* count,
                                     size_t* dim);
PF_API pf_status pf_box_coupling_check(int n, int d, int N, int L, const pf_network* net,
                                       int grid_per_box, int* ok);

/* --- bounds -------------------------------------------------------------- */

PF_API pf_status pf_tent_upper_bound(int N, int L, int n, int d, double* out);
PF_API pf_status pf_tent_upper_bound_appendix(int N, int L, int n, int d, double* out);
PF_API pf_status pf_affine_piece_bound(int N, int L, int n0, double* out);
PF_API pf_status pf_plane_distance_bound(int n, int d, double l, double m_B, double* out);
PF_API pf_status pf_dimension_gap_bound(int n, int d, double l, double m_B, double N_A,
                                        double* out);
PF_API pf_status pf_network_lower_bound(int N, int L, int n, int d, double* out);
PF_API pf_status pf_pwl_phi_best_l1(int pieces, double a, double b, double* out);
/* JSON report on unit-cube defaults (l = sqrt(d)/2, m_B = 1). */
PF_API pf_status pf_bound_report(int N, int L, int n, int d, char** out);

/* --- lab ----------------------------------------------------------------- */

/* Returns the documented defaults for every experiment kind. */
PF_API pf_status pf_experiment_defaults(char** out);
/* config: JSON {experiment, grid:{N,L,n,d,k,samples,eps}, seed, out, jobs,
 * tolerances}. seed/jobs/out_dir override the config when seed_set / jobs
 * > 0 / out_dir non-NULL. Fills csv and svg (svg may be empty). When
 * write is nonzero the files are also written under the output directory. */
PF_API pf_status pf_run_experiment(const char* config, int seed_set, uint64_t seed, unsigned jobs,
                                   const char* out_dir, int write, char** csv, char** svg);

typedef struct pf_verify_options {
  uint64_t seed;
  unsigned jobs;
  int fault_criterion; /* 0: none */
  int check_timing;
  const int* only;     /* criterion ids, NULL/0 for all */
  size_t only_count;
} pf_verify_options;

PF_API void pf_verify_options_init(pf_verify_options* opt);
/* report: JSON summary; lines: one human-readable line per criterion;
 * numeric: numbers only, for byte comparison across runs. */
PF_API pf_status pf_verify(const pf_verify_options* opt, int* all_pass, char** report,
                           char** lines, char** numeric);

#ifdef __cplusplus
}
#endif

#endif /* PUSHFORGE_PUSHFORGE_H_ */
