/* C interface to the fracmoment core: second-moment estimation of
 * stochastic wave/heat equations with fractional-in-time noise.
 *
 * All functions return fm_status; on failure fm_last_error() describes the
 * problem (thread-local). Handles are opaque and freed with the matching
 * _free call. */

#ifndef FRACMOMENT_H
#define FRACMOMENT_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    FM_OK = 0,
    FM_ERR_DOMAIN = 1,      /* invalid argument */
    FM_ERR_DALANG = 2,      /* spectral integrability (a < 2) violated */
    FM_ERR_BUDGET = 3,      /* sampling budget or truncation insufficient */
    FM_ERR_UNSUPPORTED = 4, /* operation undefined for this configuration */
    FM_ERR_INTERNAL = 5
} fm_status;

const char* fm_version(void);
/* thread-local message for the most recent failure */
const char* fm_last_error(void);

/* equation: "wave" | "heat"
 * kernel:   "smooth" (Gaussian), "riesz" (alphas[0] = alpha),
 *           "product" (alphas[0..dim)), "white" (d = 1),
 *           "riesz-white" (alphas[0] = a, the white-noise approximation
 *           family with spectral density |xi|^{a-1}) */
typedef struct fm_problem fm_problem;

fm_status fm_problem_create(const char* equation, const char* kernel, double hurst,
                            int dim, const double* alphas, int n_alphas, double u0,
                            double v0, fm_problem** out);
void fm_problem_free(fm_problem* p);

/* derived constants; any output pointer may be NULL.
 * k_mu is evaluated only when compute_k is nonzero (it costs quadrature). */
fm_status fm_constants(const fm_problem* p, int compute_k, double* alpha_h, double* a,
                       double* rho_val, double* k_equation, double* k_mu_value,
                       int* dalang_ok, double* dalang_integral);

/* truncated chaos series.  term_values/term_stderrs/term_samples, when not
 * NULL, receive n_trunc entries (n = 1..n_trunc). */
fm_status fm_chaos_estimate(const fm_problem* p, double t, int n_trunc, int64_t outer,
                            int inner, int threads, uint64_t seed, double* value,
                            double* stderr_out, int* converged, double* term_values,
                            double* term_stderrs, int64_t* term_samples);

/* stratified Feynman-Kac estimator.  k_max < 0 selects the automatic
 * truncation.  strata, when not NULL, receives up to strata_capacity rows of
 * 6 doubles (k, poisson weight, mean, stderr, configs, theta draws);
 * n_strata reports the row count. */
fm_status fm_fk_estimate(const fm_problem* p, double t, int k_max, int64_t configs,
                         int theta_samples, int threads, uint64_t seed, double* value,
                         double* stderr_out, double* tail_bound, int64_t* resamples,
                         double* strata, int strata_capacity, int* n_strata);

/* fk estimates across the white-noise approximation family (wave or heat,
 * d = 1); values/stderrs receive n_a entries */
fm_status fm_white_limit(const char* equation, double hurst, double t, double u0,
                         double v0, const double* a_seq, int n_a, int64_t configs,
                         int theta_samples, int threads, uint64_t seed, double* values,
                         double* stderrs);

/* cone probability gamma for the wave Theta law in dimension dim */
fm_status fm_gamma_cone(int dim, int64_t samples, uint64_t seed, double* value,
                        double* stderr_out);
fm_status fm_gamma_exact(int dim, double* value);

/* lower-bound constant chain c_H, c2, t2 from a gamma estimate */
fm_status fm_lower_bounds(const fm_problem* p, double gamma_estimate, double* c_h,
                          double* c2, double* t2);

/* p-th moment upper bound with supplied C1 */
fm_status fm_upper_bound(const fm_problem* p, double p_moment, double t, double c1,
                         double* value);

fm_status fm_simplex_integral(int n, double h, double t, double* out);
fm_status fm_mittag_leffler(double x, double a, double* value, double* log_value);

/* log-log growth-exponent fit; rejected is set when the fit is degenerate */
fm_status fm_growth_fit(const double* ts, const double* values, int n, double u0,
                        double* rho_out, double* residual, int* rejected);

#ifdef __cplusplus
}
#endif

#endif /* FRACMOMENT_H */
