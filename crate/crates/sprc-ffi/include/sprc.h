#ifndef SPRC_H
#define SPRC_H

/* Generated by cbindgen from sprc-ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SprcStatus {
  SPRC_STATUS_OK = 0,
  SPRC_STATUS_NULL_POINTER = 1,
  SPRC_STATUS_INVALID_ARGUMENT = 2,
  SPRC_STATUS_DIMENSION = 3,
  SPRC_STATUS_NOT_CONVERGED = 4,
  SPRC_STATUS_NOT_STABILIZING = 5,
  SPRC_STATUS_DIVERGED = 6,
  SPRC_STATUS_CONFIG = 7,
  SPRC_STATUS_IO = 8,
  SPRC_STATUS_PANIC = 9,
} SprcStatus;

// Fault codes accepted by [`sprc_plant_set_fault`].
typedef enum SprcFault {
  SPRC_FAULT_HEALTHY = 0,
  // Pitch actuator stuck at `value` degrees.
  SPRC_FAULT_PAS = 1,
  // Pitch actuator degradation with scale `value`.
  SPRC_FAULT_PAD = 2,
  // Blade stiffness scaled by `value`.
  SPRC_FAULT_BLADE_STIFFNESS = 3,
} SprcFault;

// Surrogate rotor with its disturbance generator and fault scenario.
typedef struct SprcPlant SprcPlant;

// Exponentially weighted least squares in square-root form.
typedef struct SprcRls SprcRls;

// Completed load-case simulation.
typedef struct SprcRunResult SprcRunResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null. Owned by the
// library and valid until the next failing call on the same thread.
const char *sprc_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *sprc_version(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must be null or a pointer obtained from this library and not yet freed.
void sprc_string_free(char *s);

// Creates a healthy default plant with the given disturbance.
//
// # Safety
// `out` must be a valid pointer to a handle slot.
enum SprcStatus sprc_plant_new(double amp_1p,
                               double amp_2p,
                               double sigma_e,
                               uint64_t seed,
                               struct SprcPlant **out);

// Schedules a fault on `blade` (1-based) from sample `onset`.
//
// # Safety
// `plant` must be a live handle.
enum SprcStatus sprc_plant_set_fault(struct SprcPlant *plant,
                                     enum SprcFault kind,
                                     double value,
                                     uintptr_t blade,
                                     uintptr_t onset);

// Measures the loads at sample `k` into `y_out[3]`, then advances the
// state with the pitch command `u[3]` (degrees about the collective).
//
// # Safety
// `plant` must be a live handle, `u` and `y_out` arrays of 3 doubles.
enum SprcStatus sprc_plant_step(struct SprcPlant *plant,
                                uintptr_t k,
                                const double *u,
                                double *y_out);

// # Safety
// `plant` must be null or a handle from [`sprc_plant_new`] not yet freed.
void sprc_plant_free(struct SprcPlant *plant);

// # Safety
// `out` must be a valid pointer to a handle slot.
enum SprcStatus sprc_rls_new(uintptr_t n_out,
                             uintptr_t n_reg,
                             double lambda,
                             double delta,
                             struct SprcRls **out);

// One update with regressor `z[n_reg]` and target `t[n_out]`.
//
// # Safety
// `rls` must be a live handle; `z` and `t` must hold `n_z` and `n_t` doubles.
enum SprcStatus sprc_rls_update(struct SprcRls *rls,
                                const double *z,
                                uintptr_t n_z,
                                const double *t,
                                uintptr_t n_t);

// Copies the `n_out × n_reg` estimate, row-major, into `out[len]`.
//
// # Safety
// `rls` must be a live handle and `out` hold `len` doubles.
enum SprcStatus sprc_rls_estimate(const struct SprcRls *rls, double *out, uintptr_t len);

// # Safety
// `rls` must be null or a handle from [`sprc_rls_new`] not yet freed.
void sprc_rls_free(struct SprcRls *rls);

// Stabilising solution of the discrete algebraic Riccati equation for
// `A (n×n)`, `B (n×m)`, `Q (n×n)`, `R (m×m)`. Writes `P (n×n)` and the
// gain `K (m×n)`; `iterations` may be null.
//
// # Safety
// All matrix pointers must hold the stated number of doubles.
enum SprcStatus sprc_dare_solve(uintptr_t n,
                                uintptr_t m,
                                const double *a,
                                const double *b,
                                const double *q,
                                const double *r,
                                double tol,
                                uintptr_t max_iter,
                                double *p_out,
                                double *k_out,
                                uintptr_t *iterations);

// Runs one load case described by a JSON document (same schema as the CLI).
//
// # Safety
// `config_json` must be a NUL-terminated string and `out` a valid handle slot.
enum SprcStatus sprc_run_load_case(const char *config_json, struct SprcRunResult **out);

// Number of samples in the stored series.
//
// # Safety
// `result` must be a live handle or null (returns 0).
uintptr_t sprc_run_result_len(const struct SprcRunResult *result);

// Copies the series as rows `t,u1,u2,u3,y1,y2,y3,psi` into `out[len]`,
// where `len` must equal 8 × [`sprc_run_result_len`].
//
// # Safety
// `result` must be a live handle and `out` hold `len` doubles.
enum SprcStatus sprc_run_result_series(const struct SprcRunResult *result,
                                       double *out,
                                       uintptr_t len);

// Metrics summary as a JSON string; release with [`sprc_string_free`].
//
// # Safety
// `result` must be a live handle and `out` a valid pointer.
enum SprcStatus sprc_run_result_metrics_json(const struct SprcRunResult *result, char **out);

// # Safety
// `result` must be null or a handle from [`sprc_run_load_case`] not yet freed.
void sprc_run_result_free(struct SprcRunResult *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPRC_H */
