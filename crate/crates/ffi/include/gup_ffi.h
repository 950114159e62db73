#ifndef GUP_FFI_H
#define GUP_FFI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GupModel {
  GUP_MODEL_HARMONIC_OSCILLATOR = 0,
  GUP_MODEL_SWANSON = 1,
  GUP_MODEL_POSCHL_TELLER = 2,
} GupModel;

typedef enum GupRep {
  GUP_REP_PI1 = 0,
  GUP_REP_PI2 = 1,
  GUP_REP_PI3 = 2,
  GUP_REP_PI4 = 3,
  GUP_REP_PI4_PRIME = 4,
} GupRep;

typedef enum GupStatus {
  GUP_STATUS_OK = 0,
  GUP_STATUS_NULL_POINTER = 1,
  GUP_STATUS_INVALID_ARGUMENT = 2,
  GUP_STATUS_UNSUPPORTED = 3,
  GUP_STATUS_COMPLEX_SPECTRUM = 4,
  GUP_STATUS_NON_PHYSICAL = 5,
  GUP_STATUS_NO_ROOT = 6,
  GUP_STATUS_NUMERICAL = 7,
  GUP_STATUS_BUFFER_TOO_SMALL = 8,
  GUP_STATUS_PANIC = 9,
} GupStatus;

/**
 * Opaque solved (model, representation) pair.
 */
typedef struct GupSolution GupSolution;

typedef struct GupParams {
  double hbar;
  double mass;
  double omega;
  double tau;
} GupParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Natural units, `ħ = m = ω = 1`.
 */
struct GupParams gup_params_natural(double tau);

/**
 * Solves `(model, rep)`. `alpha` and `beta` are ignored for the oscillator.
 *
 * # Safety
 * `params_in` must point to a `GupParams`; `out` must be writable.
 */
enum GupStatus gup_solution_new(enum GupModel model_kind,
                                double alpha,
                                double beta,
                                enum GupRep representation,
                                const struct GupParams *params_in,
                                struct GupSolution **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `h` must come from `gup_solution_new` and not be freed twice.
 */
void gup_solution_free(struct GupSolution *h);

/**
 * Whether the spectrum is real and bounded below (1) or not (0).
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum GupStatus gup_solution_is_physical(const struct GupSolution *h, int32_t *out);

/**
 * Energy of level `n`; the imaginary part is nonzero in the broken phase.
 *
 * # Safety
 * `h` must be a live handle; `re` and `im` must be writable.
 */
enum GupStatus gup_solution_energy(const struct GupSolution *h,
                                   uintptr_t n,
                                   double *re,
                                   double *im);

/**
 * Normalized eigenfunction of level `n` at `len` points of the real
 * parametrization (`p = i t` for Π₄), written to `out[0..len]`.
 *
 * # Safety
 * `ts` must hold `len` values and `out` room for `len` values.
 */
enum GupStatus gup_solution_wavefunction(const struct GupSolution *h,
                                         uintptr_t n,
                                         const double *ts,
                                         uintptr_t len,
                                         double *out);

/**
 * Metric `ρ(t)`, normalized so that the first states are orthonormal.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum GupStatus gup_solution_metric(const struct GupSolution *h, double t, double *out);

/**
 * Finite-difference eigenvalues of the first `count` levels on grids
 * `grid`, `2·grid`, `4·grid`, extrapolated.
 *
 * # Safety
 * `h` must be a live handle; `out` must have room for `count` values.
 */
enum GupStatus gup_solution_oracle_energies(const struct GupSolution *h,
                                            uintptr_t count,
                                            uintptr_t grid,
                                            double *out);

/**
 * Swanson reality discriminant `D(α, β)`; the spectrum is real iff `D ≥ 0`.
 *
 * # Safety
 * `params_in` must point to a `GupParams`; `out` must be writable.
 */
enum GupStatus gup_swanson_discriminant(double alpha,
                                        double beta,
                                        const struct GupParams *params_in,
                                        double *out);

/**
 * Roots β of `D(α, β) = 0` with `Ω > 0`, ascending; at most two. `count`
 * receives the number written.
 *
 * # Safety
 * `params_in` must point to a `GupParams`; `out` must have room for `cap`
 * values; `count` must be writable.
 */
enum GupStatus gup_phase_boundary(double alpha,
                                  const struct GupParams *params_in,
                                  double *out,
                                  uintptr_t cap,
                                  uintptr_t *count);

/**
 * Copies the calling thread's last error message into `buf` (NUL
 * terminated, truncated to `len`). Returns the full message length without
 * the terminator, or 0 when there is none.
 *
 * # Safety
 * `buf` must have room for `len` bytes, or be null with `len == 0`.
 */
uintptr_t gup_last_error_message(char *buf, uintptr_t len);

/**
 * Static description of a status code.
 */
const char *gup_status_string(enum GupStatus status);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* GUP_FFI_H */
