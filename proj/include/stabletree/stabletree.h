/* C interface to the alpha-stable line-breaking tree library.
 *
 * All entry points return st_status; outputs go through pointers. Handles
 * are opaque and must be released with their matching _free call. On any
 * failure st_last_error() describes the most recent error in the calling
 * thread.
 */
#ifndef STABLETREE_H
#define STABLETREE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ST_API __declspec(dllexport)
#else
#define ST_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum st_status {
  ST_OK = 0,
  ST_EINVAL = 1,   /* bad argument */
  ST_ERANGE = 2,   /* argument outside the supported domain */
  ST_EQUAD = 3,    /* quadrature failed to converge */
  ST_EIO = 4,      /* file i/o failure */
  ST_EFAIL = 5     /* other runtime failure */
} st_status;

ST_API const char* st_version(void);
ST_API const char* st_last_error(void);

/* ---- stable density ---------------------------------------------------- */

typedef struct st_model st_model;

ST_API st_status st_model_create(double alpha, st_model** out);
ST_API void st_model_free(st_model* model);

ST_API double st_model_alpha(const st_model* model);
ST_API double st_model_levy_constant(const st_model* model);
ST_API double st_model_density_at_zero(const st_model* model);

/* principal-branch (-z)^alpha for Re z <= 0 */
ST_API st_status st_exponent(const st_model* model, double re, double im,
                             double* out_re, double* out_im);
ST_API st_status st_density(const st_model* model, double x, double* out);
ST_API st_status st_log_density(const st_model* model, double x, double* out);
ST_API st_status st_density_ratio(const st_model* model, double y, double x,
                                  double* out);

/* CSV table of (x, p, log_p) over an inclusive grid */
ST_API st_status st_density_csv(const st_model* model, double from, double to,
                                double step, uint64_t seed, const char* path);

/* ---- subordinator and importance sampling ------------------------------ */

/* statistic: "mean", "laplace:<lambda>", or "qvar" */
ST_API st_status st_subordinator_estimate(const st_model* model, const char* statistic,
                                          double t, double eps, uint64_t replicas,
                                          uint64_t seed, double* estimate,
                                          double* stderr_out, double* oracle,
                                          int* has_oracle);
ST_API st_status st_subordinator_csv(const st_model* model, const char* statistic,
                                     double t, double eps, uint64_t replicas,
                                     uint64_t seed, const char* path);

ST_API st_status st_sigma_tilde_mean(const st_model* model, double t, double* out);
ST_API st_status st_sigma_tilde_laplace(const st_model* model, double lambda, double t,
                                        double* out);

/* ---- line-breaking ensembles (JSON files) ------------------------------- */

ST_API st_status st_tree_continuous_json(const st_model* model, uint64_t k,
                                         double horizon, double eps, uint64_t replicas,
                                         uint64_t seed, const char* path);
ST_API st_status st_tree_crt_json(uint64_t k, double horizon, uint64_t replicas,
                                  uint64_t seed, const char* path);
ST_API st_status st_tree_icrt_json(double theta0, const double* thetas,
                                   size_t n_thetas, uint64_t k, double horizon,
                                   uint64_t replicas, uint64_t seed, const char* path);

/* ---- discrete pipeline -------------------------------------------------- */

ST_API st_status st_tree_discrete_json(double alpha, uint64_t n, uint64_t stats_k,
                                       uint64_t seed, const char* path);

/* codeword entries and labels are 1-based on this interface.
 * decode: word has n-1 entries; parent_out must hold n entries; roots map to
 * themselves. encode: inverse direction, word_out must hold n-1 entries. */
ST_API st_status st_prufer_decode(const uint32_t* word, size_t len,
                                  uint32_t* parent_out, uint32_t* root_out);
ST_API st_status st_prufer_encode(const uint32_t* parent, uint32_t root, size_t n,
                                  uint32_t* word_out);

/* ---- verification ------------------------------------------------------- */

/* suite = one registered name, or "all". effort in (0,1] scales replica
 * counts. json_path optional (NULL skips). all_passed receives 0/1. */
ST_API st_status st_verify(const char* suite, double alpha, uint64_t seed,
                           double effort, const char* json_path, int* all_passed);
ST_API st_status st_verify_suite_names(const char*** names, size_t* count);

#ifdef __cplusplus
}
#endif

#endif /* STABLETREE_H */
