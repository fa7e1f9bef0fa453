#ifndef COLLISION_CD_H
#define COLLISION_CD_H

/* Generated by cbindgen from crates/ffi/src. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Number of histogram bins in [`CcdPitSummary`].
#define CCD_PIT_BINS 20

typedef enum CcdStatus {
  CCD_STATUS_OK = 0,
  CCD_STATUS_DOMAIN_ERROR = 1,
  CCD_STATUS_BRACKET_ERROR = 2,
  CCD_STATUS_CONVERGENCE_ERROR = 3,
  CCD_STATUS_OUT_OF_RANGE = 4,
  CCD_STATUS_INVALID_INPUT = 5,
  CCD_STATUS_NULL_POINTER = 6,
  CCD_STATUS_PANIC = 7,
} CcdStatus;

typedef enum CcdMethod {
  CCD_METHOD_BAYES = 0,
  CCD_METHOD_CD = 1,
} CcdMethod;

// Opaque observation handle.
typedef struct CcdObservation CcdObservation;

// Opaque handle to the rows of a calibration sweep.
typedef struct CcdSweep CcdSweep;

typedef struct CcdEstimate {
  double delta;
  // True when the estimate was clipped to δ = 0.
  bool at_boundary;
} CcdEstimate;

typedef struct CcdInterval {
  double lo;
  double hi;
  bool lo_clipped;
} CcdInterval;

typedef struct CcdExactRow {
  double mean_bayes;
  double mean_cd;
  double freq_bayes;
  double freq_cd;
} CcdExactRow;

typedef struct CcdCalibrationRow {
  double sigma;
  uint64_t n_reps;
  double mean_noncol_bayes;
  double mean_noncol_cd;
  double freq_high_bayes;
  double freq_high_cd;
  double stderr_mean_bayes;
  double stderr_mean_cd;
  double stderr_freq_bayes;
  double stderr_freq_cd;
  struct CcdExactRow exact;
} CcdCalibrationRow;

typedef struct CcdPitSummary {
  uint64_t n;
  double ks_stat;
  double critical_value;
  bool passes;
  double mean;
  uint64_t histogram[CCD_PIT_BINS];
} CcdPitSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static description of a status code. Never NULL.
const char *ccd_status_string(enum CcdStatus status);

// Message for the most recent failure on this thread, or NULL. The
// pointer stays valid until the next failing call on the same thread.
const char *ccd_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *ccd_version(void);

// # Safety
// `out` must be valid for writing one `double`.
enum CcdStatus ccd_bessel_i0(double x, double *out);

// # Safety
// `out` must be valid for writing one `double`.
enum CcdStatus ccd_bessel_i0_scaled(double x, double *out);

// Γ₂(x, ν), the CDF of a non-central χ² with two degrees of freedom.
//
// # Safety
// `out` must be valid for writing one `double`.
enum CcdStatus ccd_noncentral_chisq2_cdf(double x, double nu, double *out);

// Creates an observation from ‖y‖ and σ.
//
// # Safety
// `out` must be valid for writing one pointer. Release the handle with
// [`ccd_observation_free`].
enum CcdStatus ccd_observation_from_norm(double norm, double sigma, struct CcdObservation **out);

// Creates an observation from the displacement pair (y1, y2) and σ.
//
// # Safety
// As for [`ccd_observation_from_norm`].
enum CcdStatus ccd_observation_from_pair(double y1,
                                         double y2,
                                         double sigma,
                                         struct CcdObservation **out);

// # Safety
// `obs` must be NULL or a handle not yet freed.
void ccd_observation_free(struct CcdObservation *obs);

// Posterior cumulative B(δ | y).
//
// # Safety
// `obs` must be a live handle and `out` valid for one `double`.
enum CcdStatus ccd_bayes_cdf(const struct CcdObservation *obs, double delta, double *out);

// Confidence distribution C(δ | y).
//
// # Safety
// `obs` must be a live handle and `out` valid for one `double`.
enum CcdStatus ccd_cd_cdf(const struct CcdObservation *obs, double delta, double *out);

// Confidence curve |1 − 2C(δ | y)|.
//
// # Safety
// `obs` must be a live handle and `out` valid for one `double`.
enum CcdStatus ccd_confidence_curve(const struct CcdObservation *obs, double delta, double *out);

// Credibility curve |1 − 2B(δ | y)|.
//
// # Safety
// `obs` must be a live handle and `out` valid for one `double`.
enum CcdStatus ccd_credibility_curve(const struct CcdObservation *obs, double delta, double *out);

// Confidence in collision C(R | y).
//
// # Safety
// `obs` must be a live handle and `out` valid for one `double`.
enum CcdStatus ccd_collision_confidence(const struct CcdObservation *obs,
                                        double radius,
                                        double *out);

// p-value for no collision, 1 − C(R | y).
//
// # Safety
// `obs` must be a live handle and `out` valid for one `double`.
enum CcdStatus ccd_noncollision_pvalue(const struct CcdObservation *obs,
                                       double radius,
                                       double *out);

// δ at which the method's CDF equals `p`, clipped at 0.
//
// # Safety
// `obs` must be a live handle and `out` valid for one `CcdEstimate`.
enum CcdStatus ccd_quantile(const struct CcdObservation *obs,
                            enum CcdMethod method,
                            double p,
                            struct CcdEstimate *out);

// # Safety
// As for [`ccd_quantile`].
enum CcdStatus ccd_median(const struct CcdObservation *obs,
                          enum CcdMethod method,
                          struct CcdEstimate *out);

// Equal-tailed interval at `level` in (0, 1).
//
// # Safety
// `obs` must be a live handle and `out` valid for one `CcdInterval`.
enum CcdStatus ccd_level_interval(const struct CcdObservation *obs,
                                  enum CcdMethod method,
                                  double level,
                                  struct CcdInterval *out);

// Evaluates B, C and both curves on `grid[0..len]`, writing into the four
// caller-provided arrays of the same length.
//
// # Safety
// `grid` must be readable and `b`, `c`, `cc`, `cred` writable for `len`
// doubles each.
enum CcdStatus ccd_tabulate_curves(const struct CcdObservation *obs,
                                   const double *grid,
                                   size_t len,
                                   double *b,
                                   double *c,
                                   double *cc,
                                   double *cred);

// Exact means and exceedance frequencies of the non-collision
// probabilities for one scenario.
//
// # Safety
// `out` must be valid for one `CcdExactRow`.
enum CcdStatus ccd_exact_row(double delta_true,
                             double sigma,
                             double radius,
                             double threshold,
                             struct CcdExactRow *out);

// Runs a Monte Carlo sweep over `sigmas[0..n_sigmas]`.
//
// # Safety
// `sigmas` must be readable for `n_sigmas` doubles and `out` writable for
// one pointer. Release the result with [`ccd_sweep_free`].
enum CcdStatus ccd_sweep_run(double delta_true,
                             double radius,
                             const double *sigmas,
                             size_t n_sigmas,
                             uint64_t n_reps,
                             uint64_t seed,
                             double threshold,
                             struct CcdSweep **out);

// Number of rows in a sweep; 0 for NULL.
//
// # Safety
// `sweep` must be NULL or a live handle.
size_t ccd_sweep_len(const struct CcdSweep *sweep);

// # Safety
// `sweep` must be a live handle and `out` valid for one row.
enum CcdStatus ccd_sweep_row(const struct CcdSweep *sweep,
                             size_t index,
                             struct CcdCalibrationRow *out);

// # Safety
// `sweep` must be NULL or a handle not yet freed.
void ccd_sweep_free(struct CcdSweep *sweep);

// PIT diagnostic of 1 − C(R | Y) over `n` (≥ 100) simulated observations.
//
// # Safety
// `out` must be valid for one `CcdPitSummary`.
enum CcdStatus ccd_pit_sample(double delta_true,
                              double sigma,
                              double radius,
                              uint64_t n,
                              uint64_t seed,
                              struct CcdPitSummary *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COLLISION_CD_H */
