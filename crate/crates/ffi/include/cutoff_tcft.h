#ifndef CUTOFF_TCFT_H
#define CUTOFF_TCFT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TcftStatus {
  TCFT_STATUS_OK = 0,
  TCFT_STATUS_NULL_POINTER = 1,
  TCFT_STATUS_INVALID_ARGUMENT = 2,
  TCFT_STATUS_CONFIG = 3,
  TCFT_STATUS_PARSE = 4,
  TCFT_STATUS_ENGINE = 5,
  /**
   * The suite ran but at least one check failed.
   */
  TCFT_STATUS_CHECK_FAILED = 6,
  TCFT_STATUS_PANIC = 7,
} TcftStatus;

/**
 * Truncated eigenform space on `T^dim` and the cutoff it was built from.
 */
typedef struct TcftEngine TcftEngine;

/**
 * A finite operator between tensor powers of the engine's space.
 */
typedef struct TcftOperator TcftOperator;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or null. Valid until the
 * next failing call on the same thread; do not free.
 */
const char *tcft_last_error_message(void);

/**
 * Engine over eigenvalues `0..=max_eigenvalue` on `T^dim`.
 *
 * # Safety
 * `out` is a valid pointer to write a handle into.
 */
enum TcftStatus tcft_engine_new(size_t dim, uint32_t max_eigenvalue, struct TcftEngine **out);

/**
 * # Safety
 * `engine` is null or a handle from [`tcft_engine_new`] not yet freed.
 */
void tcft_engine_free(struct TcftEngine *engine);

/**
 * Number of basis forms; 0 for a null engine.
 *
 * # Safety
 * `engine` is null or a live handle.
 */
size_t tcft_basis_len(const struct TcftEngine *engine);

/**
 * Label of basis form `index`, e.g. `sin[1,0]dx2`.
 *
 * # Safety
 * `engine` is a live handle and `out` a valid pointer.
 */
enum TcftStatus tcft_basis_label(const struct TcftEngine *engine, size_t index, char **out);

/**
 * Integrates a chain in the text format to an operator.
 *
 * # Safety
 * `engine` is a live handle, `chain` a NUL-terminated string and `out` a
 * valid pointer.
 */
enum TcftStatus tcft_operator_from_chain(const struct TcftEngine *engine,
                                         const char *chain,
                                         struct TcftOperator **out);

/**
 * The projector onto the space, on `m` factors.
 *
 * # Safety
 * `engine` is a live handle and `out` a valid pointer.
 */
enum TcftStatus tcft_operator_identity(const struct TcftEngine *engine,
                                       size_t m,
                                       struct TcftOperator **out);

/**
 * `second ∘ first`.
 *
 * # Safety
 * Both operators are live handles and `out` a valid pointer.
 */
enum TcftStatus tcft_operator_compose(const struct TcftOperator *second,
                                      const struct TcftOperator *first,
                                      struct TcftOperator **out);

/**
 * Input and output arity.
 *
 * # Safety
 * `op` is a live handle; `in_arity` and `out_arity` are valid pointers.
 */
enum TcftStatus tcft_operator_shape(const struct TcftOperator *op,
                                    size_t *in_arity,
                                    size_t *out_arity);

/**
 * Matrix entry for basis-index tuples `input` and `output`.
 *
 * # Safety
 * `op` is a live handle, `input` and `output` point to arrays of the given
 * lengths (either may be null when its length is 0) and `value` is valid.
 */
enum TcftStatus tcft_operator_entry(const struct TcftOperator *op,
                                    const uint32_t *input,
                                    size_t input_len,
                                    const uint32_t *output,
                                    size_t output_len,
                                    double *value);

/**
 * Text dump, one nonzero entry per line.
 *
 * # Safety
 * `op` is a live handle and `out` a valid pointer.
 */
enum TcftStatus tcft_operator_dump(const struct TcftOperator *op, char **out);

/**
 * # Safety
 * `op` is null or a live handle.
 */
void tcft_operator_free(struct TcftOperator *op);

/**
 * # Safety
 * `s` is null or a string returned by this library.
 */
void tcft_string_free(char *s);

/**
 * Runs check groups at the engine's cutoff. `groups` is a comma-separated
 * list, or null for all groups. The report text goes to `report`; the
 * status is `CheckFailed` when any check fails.
 *
 * # Safety
 * `engine` is a live handle, `groups` null or a NUL-terminated string and
 * `report` a valid pointer.
 */
enum TcftStatus tcft_run_suite(const struct TcftEngine *engine,
                               const char *groups,
                               size_t jobs,
                               char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CUTOFF_TCFT_H */
