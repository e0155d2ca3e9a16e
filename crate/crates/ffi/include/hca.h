#ifndef HCA_H
#define HCA_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum HcaStatus {
  HCA_STATUS_OK = 0,
  HCA_STATUS_NULL_POINTER = 1,
  HCA_STATUS_INVALID_ARGUMENT = 2,
  HCA_STATUS_INVALID_SPEC = 3,
  HCA_STATUS_DIMENSION_MISMATCH = 4,
  HCA_STATUS_BIT_CAP_EXCEEDED = 5,
  HCA_STATUS_NO_REAL_ENERGY = 6,
  HCA_STATUS_SEARCH_SPACE_OVERFLOW = 7,
  /**
   * The requested quantity does not exist, e.g. no period within the limit.
   */
  HCA_STATUS_NOT_FOUND = 8,
  HCA_STATUS_INTERNAL = 9,
  HCA_STATUS_PANIC = 10,
} HcaStatus;

/**
 * Which slot of a state pair to read.
 */
typedef enum HcaComponent {
  HCA_COMPONENT_X_PREV = 0,
  HCA_COMPONENT_P_PREV = 1,
  HCA_COMPONENT_X_CURR = 2,
  HCA_COMPONENT_P_CURR = 3,
  HCA_COMPONENT_TAU_PREV = 4,
  HCA_COMPONENT_TAU_CURR = 5,
  /**
   * `2π` at the earlier tick.
   */
  HCA_COMPONENT_PI2_PREV = 6,
  HCA_COMPONENT_PI2_CURR = 7,
} HcaComponent;

typedef enum HcaMode {
  HCA_MODE_NUMERIC = 0,
  HCA_MODE_EXACT = 1,
} HcaMode;

typedef enum HcaVerdict {
  HCA_VERDICT_INSIDE = 0,
  HCA_VERDICT_BOUNDARY = 1,
  HCA_VERDICT_OUTSIDE = 2,
} HcaVerdict;

/**
 * Opaque automaton specification.
 */
typedef struct HcaSpec HcaSpec;

/**
 * Opaque state pair at ticks `(n − 1, n)`.
 */
typedef struct HcaState HcaState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *hca_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void hca_string_free(char *s);

/**
 * Builds a spec from row-major `dim × dim` matrices `s` (symmetric) and
 * `a` (antisymmetric, null for zero), with `c ≡ 1` and `l = 1`.
 *
 * # Safety
 * `s` and a non-null `a` must point to `dim * dim` values; `out` must be writable.
 */
enum HcaStatus hca_spec_new(size_t dim, const int64_t *s, const int64_t *a, struct HcaSpec **out);

/**
 * Replaces the tick-dependent step sequence `c` (repeated periodically).
 *
 * # Safety
 * `spec` must be a live handle and `c` must point to `len` values.
 */
enum HcaStatus hca_spec_set_c(struct HcaSpec *spec, const int64_t *c, size_t len);

/**
 * Dimension of the spec, or 0 for null.
 *
 * # Safety
 * `spec` must be null or a live handle.
 */
size_t hca_spec_dim(const struct HcaSpec *spec);

/**
 * # Safety
 * `spec` must be null or a handle from this library not yet freed.
 */
void hca_spec_free(struct HcaSpec *spec);

/**
 * State pair with `ψ = x + ip` at ticks `(−1, 0)` and `τ = π = 0`.
 *
 * # Safety
 * The four arrays must each hold `dim` values; `out` must be writable.
 */
enum HcaStatus hca_state_new(size_t dim,
                             const int64_t *x_prev,
                             const int64_t *p_prev,
                             const int64_t *x_curr,
                             const int64_t *p_curr,
                             struct HcaState **out);

/**
 * Parses a model file (the JSON accepted by the command-line tool).
 * Either output may be null; the state output receives null when the
 * model has no initial data.
 *
 * # Safety
 * `json` must be a NUL-terminated string; non-null outputs must be writable.
 */
enum HcaStatus hca_model_from_json(const char *json,
                                   struct HcaSpec **spec_out,
                                   struct HcaState **state_out);

/**
 * Serialises a spec and state into a model file.
 *
 * # Safety
 * Both handles must be live; `out` must be writable.
 */
enum HcaStatus hca_model_to_json(const struct HcaSpec *spec,
                                 const struct HcaState *state,
                                 char **out);

/**
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum HcaStatus hca_state_clone(const struct HcaState *state, struct HcaState **out);

/**
 * # Safety
 * `state` must be null or a handle from this library not yet freed.
 */
void hca_state_free(struct HcaState *state);

/**
 * Index `n` of the later tick of the pair.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum HcaStatus hca_state_tick(const struct HcaState *state, int64_t *out);

/**
 * Decimal string of one component. `index` selects the coordinate for the
 * vector slots and must be 0 for `τ` and `2π`.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum HcaStatus hca_state_component(const struct HcaState *state,
                                   enum HcaComponent which,
                                   size_t index,
                                   char **out);

/**
 * Advances the state one tick in place.
 *
 * # Safety
 * Both handles must be live.
 */
enum HcaStatus hca_step_forward(const struct HcaSpec *spec, struct HcaState *state);

/**
 * Moves the state back one tick in place.
 *
 * # Safety
 * Both handles must be live.
 */
enum HcaStatus hca_step_backward(const struct HcaSpec *spec, struct HcaState *state);

/**
 * Takes `k` steps in place (backward for `k < 0`). A `bitcap` of 0 selects
 * the default cap; when exceeded the state is left unchanged.
 *
 * # Safety
 * Both handles must be live.
 */
enum HcaStatus hca_evolve(const struct HcaSpec *spec,
                          struct HcaState *state,
                          int64_t k,
                          uint64_t bitcap);

/**
 * Smallest period within `max_steps`, or `NotFound`.
 *
 * # Safety
 * Both handles must be live; `out` must be writable.
 */
enum HcaStatus hca_detect_period(const struct HcaSpec *spec,
                                 const struct HcaState *state,
                                 uint64_t max_steps,
                                 uint64_t *out);

/**
 * Two-point invariant `Q_G` of the state for the Hermitian `G = re + i·im`
 * (row-major, `im` null for real), as a decimal string.
 *
 * # Safety
 * `state` must be live, the matrices must hold `dim * dim` values and
 * `out` must be writable.
 */
enum HcaStatus hca_invariant(const struct HcaState *state,
                             size_t dim,
                             const int64_t *g_re,
                             const int64_t *g_im,
                             char **out);

/**
 * Principal solution `E` of `sin(E·l) = ε/2`.
 *
 * # Safety
 * `out` must be writable.
 */
enum HcaStatus hca_dispersion_energy(double epsilon, double scale_l, double *out);

/**
 * Classifies the spectrum of the Hermitian `re + i·im` against `[−2, 2]`.
 *
 * # Safety
 * The matrices must hold `dim * dim` values; `out` must be writable.
 */
enum HcaStatus hca_spectrum_in_band(size_t dim,
                                    const int64_t *re,
                                    const int64_t *im,
                                    enum HcaMode mode,
                                    enum HcaVerdict *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HCA_H */
