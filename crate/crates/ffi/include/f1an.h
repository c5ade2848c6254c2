#ifndef F1AN_H
#define F1AN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

/**
 * Result of an FFI call.
 */
typedef enum F1anStatus {
  F1AN_STATUS_OK = 0,
  /**
   * A mathematical check failed; the report names the counterexample.
   */
  F1AN_STATUS_CHECK_FAILED = 1,
  /**
   * Malformed arguments: bad JSON, invalid radii, unknown names.
   */
  F1AN_STATUS_INVALID_INPUT = 2,
  F1AN_STATUS_NULL_POINTER = 3,
  /**
   * A panic was caught at the boundary.
   */
  F1AN_STATUS_PANIC = 4,
} F1anStatus;

/**
 * Which Gauss norm [`f1an_element_norm`] evaluates.
 */
typedef enum F1anMode {
  F1AN_MODE_L1 = 0,
  F1AN_MODE_SUP = 1,
} F1anMode;

/**
 * Opaque finite F1 element with its base and coefficient ring.
 */
typedef struct F1anElement F1anElement;

/**
 * Opaque truncated Witt vector over a Puiseux algebra in characteristic p.
 */
typedef struct F1anWitt F1anWitt;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *f1an_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be NULL or a string obtained from this library, freed once.
 */
void f1an_string_free(char *s);

/**
 * Library version; static storage, never freed.
 */
const char *f1an_version(void);

/**
 * Builds a Witt vector of length `len` whose digits are the constants
 * `digits[i]` reduced mod `p`.
 *
 * # Safety
 * `digits` must point to `len` readable values; `out` must be writable.
 */
enum F1anStatus f1an_witt_new(uint64_t p,
                              const int64_t *digits,
                              uintptr_t len,
                              struct F1anWitt **out);

/**
 * Parses `{"p": .., "digits": [puiseux, ..]}`.
 *
 * # Safety
 * `json` must be a valid C string; `out` must be writable.
 */
enum F1anStatus f1an_witt_from_json(const char *json, struct F1anWitt **out);

/**
 * Witt sum; the result is a new handle.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum F1anStatus f1an_witt_add(const struct F1anWitt *a,
                              const struct F1anWitt *b,
                              struct F1anWitt **out);

/**
 * Witt product; the result is a new handle.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum F1anStatus f1an_witt_mul(const struct F1anWitt *a,
                              const struct F1anWitt *b,
                              struct F1anWitt **out);

/**
 * Serializes a Witt vector as JSON into a new string.
 *
 * # Safety
 * `w` must be a live handle; `out` must be writable.
 */
enum F1anStatus f1an_witt_to_json(const struct F1anWitt *w, char **out);

/**
 * `max_i |d_i|_r α^i` with `α = alpha_num/alpha_den` and
 * `r = r_num/r_den`. Writes the log2 of the norm (`-inf` for zero) and,
 * if `out_json` is not NULL, the full norm document.
 *
 * # Safety
 * `w` must be a live handle; `out_log2` must be writable.
 */
enum F1anStatus f1an_witt_alpha_norm(const struct F1anWitt *w,
                                     int64_t alpha_num,
                                     int64_t alpha_den,
                                     int64_t r_num,
                                     int64_t r_den,
                                     double *out_log2,
                                     char **out_json);

/**
 * # Safety
 * `w` must be NULL or a handle from this library, freed once.
 */
void f1an_witt_free(struct F1anWitt *w);

/**
 * Parses an element document `{"base", "terms"}`.
 *
 * # Safety
 * `json` must be a valid C string; `out` must be writable.
 */
enum F1anStatus f1an_element_from_json(const char *json, struct F1anElement **out);

/**
 * Base-change norm of `e` with the plain scalar norm and the radius
 * stored in its base. Writes the norm document as a new string.
 *
 * # Safety
 * `e` must be a live handle; `out_json` must be writable.
 */
enum F1anStatus f1an_element_norm(const struct F1anElement *e, enum F1anMode mode, char **out_json);

/**
 * # Safety
 * `e` must be NULL or a handle from this library, freed once.
 */
void f1an_element_free(struct F1anElement *e);

/**
 * Runs the command line with `argv[0..argc]` (program name first) and
 * `stdin_text` as standard input (NULL for empty). Returns the exit code
 * (0, 1 or 2; -1 if an argument pointer is NULL) and writes both output
 * streams as new strings when the pointers are not NULL.
 *
 * # Safety
 * `argv` must hold `argc` valid C strings.
 */
int f1an_cli_run(int argc,
                 const char *const *argv,
                 const char *stdin_text,
                 char **out_stdout,
                 char **out_stderr);

/**
 * Runs a named suite (or `"all"`) with `seed`. Writes the JSON report
 * when `out_json` is not NULL. Returns `Ok` when every check passes and
 * `CheckFailed` otherwise.
 *
 * # Safety
 * `suite` must be a valid C string.
 */
enum F1anStatus f1an_verify(const char *suite, uint64_t seed, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* F1AN_H */
