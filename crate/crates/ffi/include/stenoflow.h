#ifndef STENOFLOW_H
#define STENOFLOW_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum SfStatus {
  SF_STATUS_OK = 0,
  SF_STATUS_NULL_POINTER = 1,
  SF_STATUS_INVALID_PARAMETER = 2,
  SF_STATUS_UNKNOWN_KEY = 3,
  SF_STATUS_GEOMETRY_INVALID = 4,
  SF_STATUS_NO_CONVERGENCE = 5,
  SF_STATUS_SERIES_DIVERGENT = 6,
  SF_STATUS_DOMAIN = 7,
  SF_STATUS_DEGENERATE_FLOW = 8,
  SF_STATUS_INTERNAL = 9,
} SfStatus;

// A validated artery. Created with `sf_model_new`, released with `sf_model_free`.
typedef struct SfModel SfModel;

// Model inputs. Created with `sf_params_new`, released with `sf_params_free`.
typedef struct SfParams SfParams;

// One station of an axial sweep.
typedef struct SfAxialRecord {
  double z;
  double eta;
  double dpdz_bar;
  double tau_bar;
  double u_center;
} SfAxialRecord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or NULL if none.
// The pointer stays valid until the next failing call on this thread.
const char *sf_last_error_message(void);

// Static description of a status code.
const char *sf_status_message(enum SfStatus status);

// Library version as a static string.
const char *sf_version(void);

// New parameter set holding the defaults.
struct SfParams *sf_params_new(void);

// # Safety
// `params` must be NULL or a handle from `sf_params_new` not yet freed.
void sf_params_free(struct SfParams *params);

// Sets one parameter by name. Keys: alpha, hematocrit, beta, m, hartmann,
// permeability, l, d, length, severity, tol, n_max. Values are checked when
// a model is built, except that m and n_max must be integers.
//
// # Safety
// `params` must be a live handle and `key` a NUL-terminated string.
enum SfStatus sf_params_set(struct SfParams *params, const char *key, double value);

// Reads one parameter by name into `*out`.
//
// # Safety
// `params` must be a live handle, `key` a NUL-terminated string and `out`
// writable.
enum SfStatus sf_params_get(const struct SfParams *params, const char *key, double *out);

// Validates `params` and builds a model into `*out`. The parameter handle
// may be freed afterwards.
//
// # Safety
// `params` must be a live handle and `out` writable.
enum SfStatus sf_model_new(const struct SfParams *params, struct SfModel **out);

// # Safety
// `model` must be NULL or a handle from `sf_model_new` not yet freed.
void sf_model_free(struct SfModel *model);

// Wall radius ratio R(z)/R0.
//
// # Safety
// `model` must be a live handle and `out` writable.
enum SfStatus sf_radius_ratio(const struct SfModel *model, double z, double *out);

// Pressure gradient over its normal-artery value at station `z`.
//
// # Safety
// `model` must be a live handle and `out` writable.
enum SfStatus sf_pressure_gradient_ratio(const struct SfModel *model, double z, double *out);

// Wall shear stress over its normal-artery value at station `z`.
//
// # Safety
// `model` must be a live handle and `out` writable.
enum SfStatus sf_wall_shear_ratio(const struct SfModel *model, double z, double *out);

// Flow rate ratio at station `z` under the pressure gradient ratio
// `dpdz_bar`. Equals 1 for the value from `sf_pressure_gradient_ratio`.
//
// # Safety
// `model` must be a live handle and `out` writable.
enum SfStatus sf_flow_rate(const struct SfModel *model, double z, double dpdz_bar, double *out);

// Samples the velocity ratio at `n` uniform radial points from the axis to
// the wall. `xi` and `u_bar` must each hold `n` values.
//
// # Safety
// `model` must be a live handle; `xi` and `u_bar` must be writable for `n`
// doubles.
enum SfStatus sf_velocity_profile(const struct SfModel *model,
                                  double z,
                                  size_t n,
                                  double *xi,
                                  double *u_bar);

// Evaluates `n` stations `z[0..n]` into `records[0..n]`. Stations are
// independent and computed in parallel; output order follows `z`. On
// failure `*failed_index` (if not NULL) receives the first failing station
// and no record is written.
//
// # Safety
// `model` must be a live handle, `z` readable and `records` writable for
// `n` elements; `failed_index` may be NULL.
enum SfStatus sf_axial_sweep(const struct SfModel *model,
                             const double *z,
                             size_t n,
                             struct SfAxialRecord *records,
                             size_t *failed_index);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STENOFLOW_H */
