#ifndef CIRCLE_MBQC_H
#define CIRCLE_MBQC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CmStatus {
  CM_STATUS_OK = 0,
  CM_STATUS_NULL_POINTER = 1,
  CM_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed input: bad JSON, wrong lengths.
   */
  CM_STATUS_INVALID_ARGUMENT = 3,
  /**
   * Well-formed input rejected by the library (e.g. a word that is not a valid tour).
   */
  CM_STATUS_DOMAIN_ERROR = 4,
  CM_STATUS_PANIC = 5,
} CmStatus;

/**
 * Opaque simulator handle.
 */
typedef struct CmSimulator CmSimulator;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a simulator from a word given one character per letter
 * (whitespace ignored), e.g. `"abcabc"`. `frame_json` may be null, otherwise
 * `{"q": [[[re,im],[re,im]],[[re,im],[re,im]]]}` per rotated qubit.
 *
 * # Safety
 * `letters` must be a valid C string, `frame_json` null or a valid C string,
 * `out` a valid pointer. On success `*out` owns a handle to free with
 * [`cm_simulator_free`].
 */
enum CmStatus cm_simulator_new(const char *letters,
                               const char *frame_json,
                               struct CmSimulator **out);

/**
 * # Safety
 * `sim` must be null or a handle from [`cm_simulator_new`] not yet freed.
 */
void cm_simulator_free(struct CmSimulator *sim);

/**
 * # Safety
 * `sim` must be a live handle and `out` a valid pointer.
 */
enum CmStatus cm_simulator_num_qubits(const struct CmSimulator *sim, size_t *out);

/**
 * Joint probability of the outcomes in `measure_json`, which is
 * `[[qubit, [x, y, z], +1 | -1], ...]` with directions in the lab frame.
 *
 * # Safety
 * `sim` must be a live handle, `measure_json` a valid C string, `out` a valid pointer.
 */
enum CmStatus cm_simulator_marginal(const struct CmSimulator *sim,
                                    const char *measure_json,
                                    double *out);

/**
 * Overlap `|<phi|psi>|^2` of the unrotated graph state with the product state
 * given by `n` pure Bloch vectors, `blochs[3*v..3*v+3]` for vertex rank `v`.
 *
 * # Safety
 * `sim` must be a live handle, `blochs` must point to `3 * n` doubles, `out` a valid pointer.
 */
enum CmStatus cm_simulator_overlap(const struct CmSimulator *sim,
                                   const double *blochs,
                                   size_t n,
                                   double *out);

/**
 * Runs one adaptive measurement plan and writes the transcript as JSON.
 * The plan is `{"steps":[{"qubit":"a","basis":{"static":[x,y,z]}}, ...]}`,
 * or `{"adaptive":{"": [..], "+": [..]}}` keyed by earlier outcomes.
 *
 * # Safety
 * `sim` must be a live handle, `plan_json` a valid C string, `out_json` a valid
 * pointer. The string written to `*out_json` must be freed with [`cm_string_free`].
 */
enum CmStatus cm_simulator_sample(const struct CmSimulator *sim,
                                  const char *plan_json,
                                  uint64_t seed,
                                  uint64_t stream,
                                  char **out_json);

/**
 * Pfaffian of a real skew-symmetric `dim x dim` matrix in row-major order.
 *
 * # Safety
 * `matrix` must point to `dim * dim` doubles (may be null when `dim == 0`), `out` a valid pointer.
 */
enum CmStatus cm_pfaffian(const double *matrix, size_t dim, double *out);

/**
 * Message for the last failed call on this thread, or null. The pointer stays
 * valid until the next library call on the same thread; do not free it.
 */
const char *cm_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed at most once.
 */
void cm_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CIRCLE_MBQC_H */
