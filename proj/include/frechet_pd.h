/* frechet_pd.h - C interface to the persistence-diagram Frechet mean library.
 *
 * All objects are opaque handles created and released by the library. Every
 * fallible call returns an fpd_status; fpd_last_error() describes the most
 * recent failure on the calling thread. Output parameters are written only
 * on FPD_OK unless documented otherwise.
 */
#ifndef FRECHET_PD_H
#define FRECHET_PD_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef int fpd_status;
#define FPD_OK 0
#define FPD_ERR_ARGUMENT 1     /* invalid argument / precondition violation */
#define FPD_ERR_CAPACITY 2     /* documented instance-size guard exceeded */
#define FPD_ERR_NONCONVERGED 3 /* iteration budget exhausted */
#define FPD_ERR_PARSE 4        /* malformed diagram data */
#define FPD_ERR_IO 5           /* file could not be read or written */
#define FPD_ERR_INTERNAL 6

#define FPD_GROUND_EUCLIDEAN 0
#define FPD_GROUND_CHEBYSHEV 1

#define FPD_FORMAT_JSON 0
#define FPD_FORMAT_CSV 1

/* Tri-state for certificate fields. */
#define FPD_NO 0
#define FPD_YES 1
#define FPD_UNKNOWN (-1)

typedef struct fpd_diagram fpd_diagram;
typedef struct fpd_pairing fpd_pairing;
typedef struct fpd_mean_result fpd_mean_result;
typedef struct fpd_mean_search fpd_mean_search;
typedef struct fpd_lln_report fpd_lln_report;
typedef struct fpd_field_model fpd_field_model;
typedef struct fpd_concentration fpd_concentration;

const char* fpd_version(void);

/* Message for the last failing call on this thread; never NULL. */
const char* fpd_last_error(void);

/* ---- diagrams ---------------------------------------------------------- */

/* points = n (birth, death) pairs, interleaved. Rejects death <= birth. */
fpd_status fpd_diagram_create(const double* points, size_t n, fpd_diagram** out);
void fpd_diagram_free(fpd_diagram* diagram);
size_t fpd_diagram_size(const fpd_diagram* diagram);
/* Copies the canonical point list into out[2 * size]. */
fpd_status fpd_diagram_points(const fpd_diagram* diagram, double* out);

fpd_status fpd_diagram_from_string(const char* data, size_t size, int format,
                                   fpd_diagram** out);
/* Canonical serialization; free the buffer with fpd_string_free. */
fpd_status fpd_diagram_to_string(const fpd_diagram* diagram, int format, char** out);
fpd_status fpd_diagram_read_file(const char* path, int format, fpd_diagram** out);
fpd_status fpd_diagram_write_file(const fpd_diagram* diagram, const char* path, int format);
void fpd_string_free(char* data);

/* keep_upper != 0 keeps persistence >= alpha, else persistence < alpha. */
fpd_status fpd_diagram_filter(const fpd_diagram* diagram, double alpha, int keep_upper,
                              fpd_diagram** out);
fpd_status fpd_diagram_prune(const fpd_diagram* diagram, double eps, fpd_diagram** out);

/* ---- distances and pairings ------------------------------------------- */

fpd_status fpd_distance(const fpd_diagram* a, const fpd_diagram* b, int ground,
                        double* distance, double* squared_distance);
fpd_status fpd_optimal_pairing(const fpd_diagram* a, const fpd_diagram* b, int ground,
                               fpd_pairing** out);
void fpd_pairing_free(fpd_pairing* pairing);
size_t fpd_pairing_num_matches(const fpd_pairing* pairing);
/* source/target are point indices, or -1 for the diagonal. */
fpd_status fpd_pairing_match(const fpd_pairing* pairing, size_t index, int64_t* source,
                             int64_t* target);
double fpd_pairing_cost(const fpd_pairing* pairing);
/* Exhaustive count of optimal pairings within tol of the minimum cost;
 * capacity-limited to 12 combined points. */
fpd_status fpd_count_optimal_pairings(const fpd_diagram* a, const fpd_diagram* b, int ground,
                                      double tol, uint64_t* count);

/* ---- geometry ---------------------------------------------------------- */

/* Point on the euclidean geodesic from a to b at parameter t in [0, 1]. */
fpd_status fpd_geodesic_evaluate(const fpd_diagram* a, const fpd_diagram* b, double t,
                                 fpd_diagram** out);
fpd_status fpd_alexandrov_check(const fpd_diagram* x, const fpd_diagram* y,
                                const fpd_diagram* z, double t, double* lhs, double* rhs,
                                int* holds);
fpd_status fpd_supporting_vector_norm(const fpd_diagram* y,
                                      const fpd_diagram* const* diagrams, size_t m,
                                      double* norm);

/* ---- Frechet means ------------------------------------------------------ */

/* init may be NULL for a random input-diagram start derived from seed. */
fpd_status fpd_mean_compute(const fpd_diagram* const* diagrams, size_t m,
                            const fpd_diagram* init, uint64_t seed, int max_iter,
                            fpd_mean_result** out);
void fpd_mean_result_free(fpd_mean_result* result);
/* Borrowed reference, valid until the result is freed. */
const fpd_diagram* fpd_mean_result_diagram(const fpd_mean_result* result);
double fpd_mean_result_value(const fpd_mean_result* result);
int fpd_mean_result_iterations(const fpd_mean_result* result);
int fpd_mean_result_converged(const fpd_mean_result* result);
size_t fpd_mean_result_trace_size(const fpd_mean_result* result);
fpd_status fpd_mean_result_trace(const fpd_mean_result* result, double* out);
double fpd_mean_result_support_norm(const fpd_mean_result* result);
/* FPD_YES / FPD_NO / FPD_UNKNOWN. */
int fpd_mean_result_pairings_unique(const fpd_mean_result* result);

fpd_status fpd_mean_multi_restart(const fpd_diagram* const* diagrams, size_t m, int restarts,
                                  uint64_t seed, int max_iter, int jobs,
                                  fpd_mean_search** out);
void fpd_mean_search_free(fpd_mean_search* search);
const fpd_mean_result* fpd_mean_search_best(const fpd_mean_search* search);
size_t fpd_mean_search_num_minima(const fpd_mean_search* search);
const fpd_diagram* fpd_mean_search_minimum(const fpd_mean_search* search, size_t index);
int fpd_mean_search_restarts_converged(const fpd_mean_search* search);

/* Brute-force global search; guarded by prod(k_i + 1) <= 1e5. The mean
 * handle is owned by the caller. */
fpd_status fpd_oracle_mean(const fpd_diagram* const* diagrams, size_t m, fpd_diagram** mean,
                           double* frechet_value, uint64_t* num_local_minima);

/* ---- law-of-large-numbers experiment ----------------------------------- */

fpd_status fpd_lln_run(const fpd_diagram* const* atoms, size_t m, const fpd_diagram* y,
                       uint64_t n, double delta, uint64_t trials, uint64_t seed, int jobs,
                       fpd_lln_report** out);
void fpd_lln_report_free(fpd_lln_report* report);
double fpd_lln_bound(const fpd_lln_report* report);
size_t fpd_lln_num_trials(const fpd_lln_report* report);
fpd_status fpd_lln_trial(const fpd_lln_report* report, size_t index, double* d_squared,
                         int* within_bound);
double fpd_lln_coverage(const fpd_lln_report* report);
double fpd_lln_mean_d_squared(const fpd_lln_report* report);
double fpd_lln_max_d_squared(const fpd_lln_report* report);
uint64_t fpd_lln_certificate_failures(const fpd_lln_report* report);

/* ---- Gaussian random fields and persistence ---------------------------- */

/* Factors the covariance once; draws are cheap afterwards. Guarded by
 * grid_size^2 <= 1e4 vertices. */
fpd_status fpd_field_model_create(int grid_size, double alpha, double jitter, uint64_t seed,
                                  fpd_field_model** out);
void fpd_field_model_free(fpd_field_model* model);
/* Superlevel persistence diagram (dimension 0 or 1) of draw field_index,
 * reported in sublevel convention (birth < death). */
fpd_status fpd_field_model_diagram(const fpd_field_model* model, uint64_t field_index,
                                   int dimension, fpd_diagram** out);

/* prune_eps > 0 drops group-mean points below that persistence before the
 * variance step (the input diagrams are used as given). */
fpd_status fpd_concentration_run(const fpd_diagram* const* diagrams, size_t count,
                                 const uint64_t* sample_sizes, size_t num_sizes,
                                 uint64_t groups, uint64_t seed, int jobs, double prune_eps,
                                 fpd_concentration** out);
void fpd_concentration_free(fpd_concentration* report);
fpd_status fpd_concentration_variance(const fpd_concentration* report, size_t size_index,
                                      double* variance);
/* Borrowed reference, valid until the report is freed. */
const fpd_diagram* fpd_concentration_group_mean(const fpd_concentration* report,
                                                size_t size_index, size_t group_index);

#ifdef __cplusplus
}
#endif

#endif /* FRECHET_PD_H */
