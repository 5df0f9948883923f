#ifndef ECHELON_H
#define ECHELON_H

/* Generated by cbindgen from the echelon-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible call.
 */
typedef enum {
  /**
   * The call succeeded.
   */
  ECH_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  ECH_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8 or failed to parse.
   */
  ECH_STATUS_PARSE = 2,
  /**
   * The arguments were structurally invalid for the operation.
   */
  ECH_STATUS_INVALID = 3,
  /**
   * The computation exceeded a configured capacity bound.
   */
  ECH_STATUS_CAPACITY = 4,
} EchStatus;

/**
 * An opaque handle to a finite poset.
 */
typedef struct EchPoset EchPoset;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version of the underlying library, as a static NUL-terminated string.
 */
const char *ech_version(void);

/**
 * Message describing the most recent failure on the calling thread, or an
 * empty string if none.  The pointer stays valid until the next failing
 * call from the same thread.
 */
const char *ech_last_error_message(void);

/**
 * Parses a poset from its JSON document and stores a new handle in `out`.
 */
EchStatus ech_poset_from_json(const char *json, EchPoset **out);

/**
 * Builds a poset from a family spec such as `"boolean(3)"` or
 * `"tamari(4)"`.  The spec must describe exactly one poset.
 */
EchStatus ech_poset_from_family(const char *spec, EchPoset **out);

/**
 * Serializes the poset as a JSON document.  The returned string must be
 * released with [`ech_string_free`].
 */
EchStatus ech_poset_to_json(const EchPoset *p, char **out);

/**
 * Releases a string produced by this library.
 */
void ech_string_free(char *s);

/**
 * Releases a poset handle.
 */
void ech_poset_free(EchPoset *p);

/**
 * Number of elements of the poset.
 */
EchStatus ech_poset_size(const EchPoset *p, size_t *out);

/**
 * Whether `x ≤ y` in the poset order.
 */
EchStatus ech_poset_leq(const EchPoset *p, size_t x, size_t y, bool *out);

/**
 * Writes the lexicographically first linear extension into `out_order`,
 * a caller-allocated buffer of length [`ech_poset_size`]: `out_order[k]`
 * is the element at position `k`.
 */
EchStatus ech_first_extension(const EchPoset *p, size_t *out_order);

/**
 * Computes echelonmotion and writes `out_images[x] = Ech(x)` into a
 * caller-allocated buffer of length [`ech_poset_size`].
 *
 * `order` selects the linear extension as an array of the same length with
 * `order[k]` the element at position `k`; pass null for the
 * lexicographically first extension.
 */
EchStatus ech_echelonmotion(const EchPoset *p, const size_t *order, size_t *out_images);

/**
 * Whether echelonmotion is the same bijection for every linear extension.
 */
EchStatus ech_is_echelon_independent(const EchPoset *p, bool *out);

/**
 * Computes rowmotion on a lattice and writes `out_images[x] = Row(x)` into
 * a caller-allocated buffer of length [`ech_poset_size`].
 *
 * The poset must be a semidistributive or trim lattice; the applicable
 * rowmotion (canonical label transfer or chain-label matching) is chosen
 * automatically.
 */
EchStatus ech_rowmotion(const EchPoset *p, size_t *out_images);

/**
 * Computes the MacNeille completion and stores a new handle in `out`.
 *
 * When `embedding_out` is non-null it must point to a caller-allocated
 * buffer of length [`ech_poset_size`] of the input; it receives the index
 * of each input element inside the completion.
 */
EchStatus ech_macneille_completion(const EchPoset *p, EchPoset **out, size_t *embedding_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ECHELON_H */
