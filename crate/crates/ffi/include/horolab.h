#ifndef HOROLAB_H
#define HOROLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  HOROLAB_STATUS_OK = 0,
  HOROLAB_STATUS_NULL_POINTER = 1,
  HOROLAB_STATUS_USAGE = 2,
  HOROLAB_STATUS_DOMAIN = 3,
  HOROLAB_STATUS_UNSUPPORTED = 4,
  HOROLAB_STATUS_NUMERIC = 5,
  HOROLAB_STATUS_INTERNAL = 6,
  HOROLAB_STATUS_PANIC = 7,
} HorolabStatus;

/**
 * An explicit spherical representation model.
 */
typedef struct HorolabModel HorolabModel;

/**
 * One symmetric-space level.
 */
typedef struct HorolabSpace HorolabSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next horolab call on the same thread.
 */
const char *horolab_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *horolab_version(void);

/**
 * Create a level. `family` is one of SO, SU, Sp, SL, SL2; `p` is ignored
 * for SL and SL2; `level` is q, n or r.
 *
 * # Safety
 * `family` must be a NUL-terminated string and `out` a valid pointer.
 */
HorolabStatus horolab_space_new(const char *family,
                                uintptr_t p,
                                uintptr_t level,
                                HorolabSpace **out);

/**
 * # Safety
 * `space` must come from `horolab_space_new` and not be freed twice.
 */
void horolab_space_free(HorolabSpace *space);

/**
 * Rank of a level, 0 for a null handle.
 *
 * # Safety
 * `space` must be null or a live handle.
 */
uintptr_t horolab_space_rank(const HorolabSpace *space);

/**
 * c(μ+ρ) for μ given by its ω-coefficients.
 *
 * # Safety
 * `space` must be a live handle, `mu` must hold `mu_len` values and `out`
 * must be valid.
 */
HorolabStatus horolab_c_value(const HorolabSpace *space,
                              const uint64_t *mu,
                              uintptr_t mu_len,
                              double *out);

/**
 * c_μ = c(μ+ρ)^s with s = 1/2 when `half` is nonzero, else s = 1.
 *
 * # Safety
 * As for `horolab_c_value`.
 */
HorolabStatus horolab_c_mu(const HorolabSpace *space,
                           const uint64_t *mu,
                           uintptr_t mu_len,
                           int32_t half,
                           double *out);

/**
 * Explicit model of weight μ on a level (SO(1,q), SL(2), SL(2)^r).
 *
 * # Safety
 * `space` must be a live handle, `mu` must hold `mu_len` values and `out`
 * must be valid.
 */
HorolabStatus horolab_model_new(const HorolabSpace *space,
                                const uint64_t *mu,
                                uintptr_t mu_len,
                                HorolabModel **out);

/**
 * # Safety
 * `model` must come from `horolab_model_new` and not be freed twice.
 */
void horolab_model_free(HorolabModel *model);

/**
 * Dimension of the model, 0 for a null handle.
 *
 * # Safety
 * `model` must be null or a live handle.
 */
uintptr_t horolab_model_dim(const HorolabModel *model);

/**
 * The constant c with ∫_{K₀} π*(k)u* dk = c e*.
 *
 * # Safety
 * `model` must be a live handle and `out` valid.
 */
HorolabStatus horolab_c_mu_oracle(const HorolabModel *model, double *out);

/**
 * Largest relative error of R*ψ_v = c_μ f_v over `points` seeded random
 * pairs (v, x).
 *
 * # Safety
 * `model` must be a live handle and `out` valid.
 */
HorolabStatus horolab_dual_radon_check(const HorolabModel *model,
                                       uintptr_t points,
                                       uint64_t seed,
                                       double *out);

/**
 * Run acceptance criterion `id` (1..13); `passed` receives 1 or 0.
 *
 * # Safety
 * `passed` must be valid.
 */
HorolabStatus horolab_verify(uint32_t id, int32_t quick, int32_t *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOROLAB_H */
