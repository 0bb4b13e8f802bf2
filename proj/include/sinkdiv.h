#ifndef SINKDIV_H
#define SINKDIV_H
/*
 * Project     : sinkdiv
 * Module      : c api
 * Description : C interface of the shared library: opaque plan handles,
 *               status codes, divergence/sweep/bench entry points.
 *
 * All functions return a sinkdiv_status; outputs go through pointers.
 * sinkdiv_last_error() holds a thread-local detail message for the most
 * recent failing call on the calling thread.
 */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define SINKDIV_VERSION "1.0.0"
#define SINKDIV_MAX_AXES 8

typedef enum sinkdiv_status {
  SINKDIV_OK = 0,
  SINKDIV_ERR_INVALID_ARGUMENT = 1,
  SINKDIV_ERR_LENGTH_MISMATCH = 2,
  SINKDIV_ERR_ZERO_MASS_PART = 3,
  SINKDIV_ERR_OUT_OF_RANGE = 4,
  SINKDIV_ERR_BAD_SIZE = 5,
  SINKDIV_ERR_UNKNOWN_SMOOTHNESS = 6,
  SINKDIV_ERR_DIVERGENT_RANK = 7,
  SINKDIV_ERR_NONPOSITIVE_DENOMINATOR = 8,
  SINKDIV_ERR_MAX_ITER_EXCEEDED = 9,
  SINKDIV_ERR_IO = 10,
  SINKDIV_ERR_INTERNAL = 11
} sinkdiv_status;

const char* sinkdiv_status_name(sinkdiv_status status);

/* Process exit code class for a status: 0 ok, 2 input validation,
 * 3 convergence, 4 numerical, 5 i/o, 1 internal. */
int sinkdiv_exit_code(sinkdiv_status status);

const char* sinkdiv_last_error(void);
const char* sinkdiv_version(void);

typedef struct sinkdiv_config {
  double lambda;   /* regularization strength, > 0 */
  double p;        /* cost exponent |x-y|^p and divergence root */
  double eps_tol;  /* hierarchical approximation tolerance */
  double eps_s;    /* scaling stopping tolerance (infinity norm) */
  double eta0;     /* admissibility threshold; 1 = 2/alpha for p = 2 */
  int64_t n_min;   /* minimal block size; axis sizes must be n_min * 2^m */
  int64_t max_iter;
} sinkdiv_config;

/* lambda=50, p=2, eps_tol=0.01, eps_s=0.01, eta0=1, n_min=32, max_iter=10000 */
sinkdiv_config sinkdiv_config_default(void);

/* A plan holds the tensor grid on [0,1]^d (axis sizes nk, axis 1 fastest in
 * the linear index) and the hierarchical factors of Q and Qhat. */
typedef struct sinkdiv_plan sinkdiv_plan;

sinkdiv_status sinkdiv_plan_create(const int64_t* nk, int64_t d,
                                   const sinkdiv_config* config, sinkdiv_plan** out);
void sinkdiv_plan_destroy(sinkdiv_plan* plan);
int64_t sinkdiv_plan_size(const sinkdiv_plan* plan);

/* Sinkhorn divergence S_{p,lambda}(f, g) for probability vectors of length
 * n = prod nk. iterations/residual may be NULL. */
sinkdiv_status sinkdiv_plan_divergence(const sinkdiv_plan* plan, const double* f,
                                       const double* g, int64_t n, double* value,
                                       int64_t* iterations, double* residual);

/* Leaf list of one hierarchical factor as csv
 * (row_start,row_end,col_start,col_end,kind,rank); axis in [1, d],
 * hat selects the Qhat factor. */
sinkdiv_status sinkdiv_plan_dump_partition(const sinkdiv_plan* plan, int64_t axis,
                                           int hat, const char* path);

/* Dense reference path (exact kernel); quadratic memory, limited to
 * n <= 8192. */
sinkdiv_status sinkdiv_dense_divergence(const int64_t* nk, int64_t d,
                                        const sinkdiv_config* config, const double* f,
                                        const double* g, int64_t n, double* value,
                                        int64_t* iterations, double* residual);

/* 1-D W2 between probability vectors on the uniform [0,1] grid. */
sinkdiv_status sinkdiv_w2(const double* f, const double* g, int64_t n, double* value);

/* Sign split with independent normalization; pos/neg hold n entries each. */
sinkdiv_status sinkdiv_split_normalize(const double* signal, int64_t n, double* pos,
                                       double* neg, double* pos_mass, double* neg_mass);

/* Vector csv: optional header "# n=<int> d=<int> nk=<comma list>", one value
 * per line. Reader allocates *values (release with sinkdiv_free); nk must
 * hold SINKDIV_MAX_AXES entries and is filled up to *d. */
sinkdiv_status sinkdiv_read_vector(const char* path, double** values, int64_t* n,
                                   int64_t* d, int64_t* nk);
sinkdiv_status sinkdiv_write_vector(const char* path, const double* values, int64_t n,
                                    int64_t d, const int64_t* nk);
void sinkdiv_free(double* values);

typedef struct sinkdiv_sweep_params {
  double sigma;
  int64_t n;
  int64_t num_shifts;
  int threads;
  int with_dense; /* <0 auto (n <= 4096), 0 off, >0 on */
} sinkdiv_sweep_params;

/* Three-pulse shift sweep; writes shift,d_E,d_W,d_S,d_S_H rows to out_csv. */
sinkdiv_status sinkdiv_sweep(const sinkdiv_sweep_params* params,
                             const sinkdiv_config* config, const char* out_csv);

/* Hierarchical evaluation wall time per n, median of max(3, reps)
 * repetitions; writes n,seconds,repetitions rows to out_csv. */
sinkdiv_status sinkdiv_bench(const int64_t* n_list, int64_t count, double sigma,
                             int reps, const sinkdiv_config* config,
                             const char* out_csv);

#ifdef __cplusplus
}
#endif

#endif
