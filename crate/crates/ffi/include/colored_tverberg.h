#ifndef COLORED_TVERBERG_H
#define COLORED_TVERBERG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result codes shared by every entry point.
 */
typedef enum TvStatus {
  TV_OK = 0,
  /**
   * The search finished and no witness exists.
   */
  TV_NOT_FOUND = 1,
  /**
   * A null pointer or an out-of-range parameter.
   */
  TV_INVALID_ARGUMENT = 2,
  /**
   * Malformed JSON or a document that is not a valid instance / witness.
   */
  TV_PARSE_ERROR = 3,
  /**
   * The witness does not satisfy the instance.
   */
  TV_INVALID_WITNESS = 4,
  /**
   * The coloring is not general, or a reduction check failed.
   */
  TV_REDUCTION_FAILED = 5,
  /**
   * An internal panic was caught at the boundary.
   */
  TV_INTERNAL_ERROR = 6,
} TvStatus;

/**
 * Opaque instance handle.
 */
typedef struct TvInstance TvInstance;

/**
 * Opaque witness handle.
 */
typedef struct TvWitness TvWitness;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failing call on this thread, or null. Valid until
 * the next call into this library on the same thread.
 */
const char *tv_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *tv_version(void);

/**
 * Parses an instance document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum TvStatus tv_instance_from_json(const char *json, struct TvInstance **out);

/**
 * Generates a seeded instance. `profile` is one of "special",
 * "singletons", "random", "bl".
 *
 * # Safety
 * `profile` must be a NUL-terminated string; `out` must be writable.
 */
enum TvStatus tv_instance_generate(size_t d,
                                   size_t r,
                                   const char *profile,
                                   uint64_t seed,
                                   struct TvInstance **out);

/**
 * Serializes an instance document.
 *
 * # Safety
 * `instance` must come from this library; `out` must be writable.
 */
enum TvStatus tv_instance_to_json(const struct TvInstance *instance, char **out);

/**
 * Ambient dimension, or 0 for a null handle.
 *
 * # Safety
 * `instance` must be null or come from this library.
 */
size_t tv_instance_dimension(const struct TvInstance *instance);

/**
 * Number of parts requested, or 0 for a null handle.
 *
 * # Safety
 * `instance` must be null or come from this library.
 */
size_t tv_instance_parts(const struct TvInstance *instance);

/**
 * Number of points, or 0 for a null handle.
 *
 * # Safety
 * `instance` must be null or come from this library.
 */
size_t tv_instance_num_vertices(const struct TvInstance *instance);

/**
 * Coloring kind: 0 special, 1 general, 2 invalid, -1 null handle.
 *
 * # Safety
 * `instance` must be null or come from this library.
 */
int32_t tv_instance_coloring_kind(const struct TvInstance *instance);

/**
 * Releases an instance. Null is accepted.
 *
 * # Safety
 * `instance` must be null or come from this library and not be used again.
 */
void tv_instance_free(struct TvInstance *instance);

/**
 * Finds the first witness in enumeration order. Returns `TV_NOT_FOUND`
 * when none exists; `*out` is then left untouched.
 *
 * # Safety
 * `instance` must come from this library; `out` must be writable.
 */
enum TvStatus tv_solve(const struct TvInstance *instance,
                       bool require_all_vertices,
                       struct TvWitness **out);

/**
 * Parses a witness document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum TvStatus tv_witness_from_json(const char *json, struct TvWitness **out);

/**
 * Serializes a witness document.
 *
 * # Safety
 * `witness` must come from this library; `out` must be writable.
 */
enum TvStatus tv_witness_to_json(const struct TvWitness *witness, char **out);

/**
 * Number of faces in the witness, or 0 for a null handle.
 *
 * # Safety
 * `witness` must be null or come from this library.
 */
size_t tv_witness_num_faces(const struct TvWitness *witness);

/**
 * Releases a witness. Null is accepted.
 *
 * # Safety
 * `witness` must be null or come from this library and not be used again.
 */
void tv_witness_free(struct TvWitness *witness);

/**
 * Exact check: `TV_OK` if valid, `TV_INVALID_WITNESS` otherwise.
 *
 * # Safety
 * Both handles must come from this library.
 */
enum TvStatus tv_verify(const struct TvInstance *instance, const struct TvWitness *witness);

/**
 * Lifts, solves, pulls back and verifies. On success `*out` receives the
 * witness for the original instance. If `report` is non-null it receives
 * the text report whether or not the run succeeded.
 *
 * # Safety
 * `instance` must come from this library; `out` must be writable;
 * `report` must be null or writable.
 */
enum TvStatus tv_roundtrip(const struct TvInstance *instance,
                           struct TvWitness **out,
                           char **report);

/**
 * Releases a string returned by this library. Null is accepted.
 *
 * # Safety
 * `text` must be null or come from this library and not be used again.
 */
void tv_string_free(char *text);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COLORED_TVERBERG_H */
